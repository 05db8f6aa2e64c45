from .app import build_provider, create_app
from .comparison import build_comparison, canonical_json
from .config import ServiceConfig, load_config
from .session import (
    CODE_FINALIZED,
    CODE_GENERATED,
    DRAFT,
    PLANNED,
    RULES_FINALIZED,
    RULES_GENERATED,
    STAGES,
    Session,
    SessionInputs,
    SessionManager,
    SessionStore,
    session_from_doc,
    session_to_doc,
)

__all__ = [
    "CODE_FINALIZED",
    "CODE_GENERATED",
    "DRAFT",
    "PLANNED",
    "RULES_FINALIZED",
    "RULES_GENERATED",
    "STAGES",
    "ServiceConfig",
    "Session",
    "SessionInputs",
    "SessionManager",
    "SessionStore",
    "build_comparison",
    "build_provider",
    "canonical_json",
    "create_app",
    "load_config",
    "session_from_doc",
    "session_to_doc",
]
