# The whole pipeline, stage by stage
#
# Three stages connected only by line-delimited stage files: questions,
# answers, verdicts. Each stage can be re-run on its own, and identical
# inputs always produce byte-identical outputs. This script runs the bundled
# ten-claim dataset with the gold-answer oracle backend and prints the
# evaluation report.
#
# The command-line equivalent of everything below:
#
#     clozecheck run --config demos/data/config.json
#
# or stage by stage: genq, answer, classify, each with --config.

import shutil
import tempfile
from pathlib import Path

from clozecheck import load_config, run_answer, run_classify, run_genq

DATA = Path(__file__).parent / "data"

# Work in a scratch copy so repeated runs start clean.
workdir = Path(tempfile.mkdtemp(prefix="clozecheck-demo-"))
for name in ("claims.jsonl", "vocab.txt", "gazetteer.json", "config.json"):
    shutil.copy(DATA / name, workdir / name)

config = load_config(workdir / "config.json")

# Stage 1: tag entities and mask them into questions.
stats = run_genq(config)
print(f"genq: {stats.total_questions} questions from {stats.converted_claims}/{stats.total_claims} claims")

# Stage 2: answer each question. The oracle backend replays the gold answer
# for every question; swap the config's backend for "scripted" (a canned
# answer file) or "remote" (a masked-LM service speaking the wire protocol)
# without touching anything else.
run = run_answer(config)
correct = sum(1 for result in run.results if result.correct)
print(f"answer: {correct}/{len(run.results)} correct, {len(run.failed_claims)} failed claims")

# Stage 3: score, label, report. With every answer correct, every converted
# claim scores 1 and every gold-SUPPORTS claim is labeled SUPPORTS.
report = run_classify(config)
print()
print(report.render_text())

print("stage files written to:", config.output_dir)
for path in sorted(config.output_dir.iterdir()):
    print("  ", path.name)
