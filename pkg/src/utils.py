import json
import logging
from typing import Any, Dict, List, Optional


def setup_logging(log_level: str = "WARNING", log_file: Optional[str] = None) -> logging.Logger:
    """Setup logging configuration"""
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
    return logging.getLogger(__name__)


def dump_json(payload: Any, indent: Optional[int] = 2) -> str:
    """Serialize a payload with sorted keys so equal inputs print identically"""
    return json.dumps(payload, indent=indent, sort_keys=True, ensure_ascii=False)


def atom_name(index: int) -> str:
    """Render an atom index the way the grammar spells it"""
    return f"p{index}"


def format_valuation(valuation: Dict[int, Any]) -> Dict[str, Any]:
    """Key a valuation by atom names in index order"""
    return {atom_name(j): valuation[j] for j in sorted(valuation)}

