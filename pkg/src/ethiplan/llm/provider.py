"""Text-generation providers: HTTP chat endpoint, deterministic mock."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from typing import Protocol

import httpx

from ..errors import ProviderError, ValidationError

API_KEY_ENV = "P2P_LLM_API_KEY"


@dataclass(frozen=True)
class ProviderRequest:
    model: str
    system_instructions: str
    user_content: str
    max_output: int = 4096
    temperature: float = 0.0

    def __post_init__(self):
        if not self.model:
            raise ValidationError("provider request needs a model name")
        if self.max_output <= 0:
            raise ValidationError("token budget must be positive")


def prompt_digest(request: ProviderRequest) -> str:
    """Stable key over prompt text only; the chosen model does not matter."""
    payload = request.system_instructions + "\x00" + request.user_content
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Provider(Protocol):
    def complete(self, request: ProviderRequest) -> str: ...


class HttpProvider:
    """Chat-completion-style endpoint adapter."""

    def __init__(self, base_url: str, timeout: float = 120.0, api_key: str | None = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._api_key = api_key

    def complete(self, request: ProviderRequest) -> str:
        key = self._api_key or os.environ.get(API_KEY_ENV, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        body = {
            "model": request.model,
            "messages": [
                {"role": "system", "content": request.system_instructions},
                {"role": "user", "content": request.user_content},
            ],
            "max_tokens": request.max_output,
            "temperature": request.temperature,
        }
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise ProviderError(f"provider request failed: {exc}") from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"malformed provider response: {exc}") from exc


class MockProvider:
    """Offline provider keyed by a digest of the prompt.

    Known digests return their fixture; unknown prompts return the
    scripted default response.
    """

    def __init__(self, fixtures: dict[str, str], default: str):
        self.fixtures = dict(fixtures)
        self.default = default
        self.calls: list[str] = []

    def complete(self, request: ProviderRequest) -> str:
        digest = prompt_digest(request)
        self.calls.append(digest)
        return self.fixtures.get(digest, self.default)


class ScriptedProvider:
    """Returns canned responses in order; repeats the last one when
    exhausted. Used to exercise the repair loop."""

    def __init__(self, responses: list[str]):
        if not responses:
            raise ValidationError("scripted provider needs at least one response")
        self.responses = list(responses)
        self.calls = 0

    def complete(self, request: ProviderRequest) -> str:
        index = min(self.calls, len(self.responses) - 1)
        self.calls += 1
        return self.responses[index]
