"""Fill-mask inference server speaking the clozecheck masked-LM wire protocol."""

from .app import ServerConfig, create_app
from .model import MapMaskFiller, MaskFiller, TransformersMaskFiller

__version__ = "0.1.0"

__all__ = ["ServerConfig", "create_app", "MaskFiller", "MapMaskFiller", "TransformersMaskFiller"]
