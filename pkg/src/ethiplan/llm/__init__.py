from .fixtures import build_fixture_table, context_for_example, default_mock_provider
from .generate import GenerationResult, RepairPolicy, generate_code, generate_rules
from .interchange import (
    extract_code_block,
    extract_json_document,
    parse_rule_response,
    rules_to_document,
)
from .prompts import (
    DEFAULT_MODEL,
    RuleGenerationContext,
    build_code_prompt,
    build_rule_prompt,
)
from .provider import (
    API_KEY_ENV,
    HttpProvider,
    MockProvider,
    Provider,
    ProviderRequest,
    ScriptedProvider,
    prompt_digest,
)

__all__ = [
    "API_KEY_ENV",
    "DEFAULT_MODEL",
    "GenerationResult",
    "HttpProvider",
    "MockProvider",
    "Provider",
    "ProviderRequest",
    "RepairPolicy",
    "RuleGenerationContext",
    "ScriptedProvider",
    "build_code_prompt",
    "build_fixture_table",
    "build_rule_prompt",
    "context_for_example",
    "default_mock_provider",
    "extract_code_block",
    "extract_json_document",
    "generate_code",
    "generate_rules",
    "parse_rule_response",
    "prompt_digest",
    "rules_to_document",
]
