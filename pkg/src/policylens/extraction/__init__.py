"""Policy-link discovery, main-text extraction, gating and deduplication."""
from .content import extract_dense, extract_main_text, extract_pruned, visible_text
from .gate import GateVerdict, detect_language, gate
from .links import PolicyLink, find_full_policy_links, find_policy_links
from .store import CorpusStore, PolicySnapshot, UniquePolicyText, content_hash, normalize_text

__all__ = [
    "CorpusStore",
    "GateVerdict",
    "PolicyLink",
    "PolicySnapshot",
    "UniquePolicyText",
    "content_hash",
    "detect_language",
    "extract_dense",
    "extract_main_text",
    "extract_pruned",
    "find_full_policy_links",
    "find_policy_links",
    "gate",
    "normalize_text",
    "visible_text",
]
