"""Mask-filling backends: a pretrained masked-LM wrapper and a scripted stand-in."""

from __future__ import annotations

from typing import Protocol, Sequence


class MaskFiller(Protocol):
    """Fills one mask slot with up to ``top_k`` (token, score) candidates."""

    mask_token: str

    def fill(
        self, tokens: Sequence[str], mask_position: int, top_k: int, query_id: str | None = None
    ) -> list[tuple[str, float]]: ...


class TransformersMaskFiller:
    """Fill-mask inference over any compatible pretrained checkpoint.

    The wire protocol transmits token strings, so this wrapper resolves them
    against the checkpoint's vocabulary itself: request tokens unknown to the
    model map to its unknown-token id and prediction proceeds. Sequences are
    framed with the model's classifier/separator tokens internally; the
    caller's mask position is translated and never echoed differently.
    """

    def __init__(self, model_id: str) -> None:
        import torch
        from transformers import AutoModelForMaskedLM, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForMaskedLM.from_pretrained(model_id)
        self.model.eval()
        self.mask_token = self.tokenizer.mask_token

    def fill(
        self, tokens: Sequence[str], mask_position: int, top_k: int, query_id: str | None = None
    ) -> list[tuple[str, float]]:
        torch = self._torch
        ids = self.tokenizer.convert_tokens_to_ids(list(tokens))
        input_ids = [self.tokenizer.cls_token_id, *ids, self.tokenizer.sep_token_id]
        with torch.no_grad():
            logits = self.model(input_ids=torch.tensor([input_ids])).logits
        probabilities = torch.softmax(logits[0, mask_position + 1], dim=-1)
        k = min(top_k, probabilities.shape[-1])
        top = torch.topk(probabilities, k=k)
        candidates = self.tokenizer.convert_ids_to_tokens(top.indices.tolist())
        return [(token, float(score)) for token, score in zip(candidates, top.values.tolist())]


class MapMaskFiller:
    """Scripted filler answering from a query-id -> token map (for protocol tests).

    Behaves like a perfectly confident model: the mapped token scores 1.0 and
    optional filler candidates pad the list when more than one is requested.
    """

    def __init__(self, answers: dict[str, str], mask_token: str = "[MASK]") -> None:
        self.answers = dict(answers)
        self.mask_token = mask_token

    def fill(
        self, tokens: Sequence[str], mask_position: int, top_k: int, query_id: str | None = None
    ) -> list[tuple[str, float]]:
        if query_id is None or query_id not in self.answers:
            raise KeyError(f"no scripted answer for query {query_id!r}")
        candidates = [(self.answers[query_id], 1.0)]
        for i in range(top_k - 1):
            candidates.append((f"filler{i}", max(0.0, 0.9 - 0.1 * i)))
        return candidates
