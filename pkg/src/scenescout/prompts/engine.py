"""Issue rendered prompts through the model provider and parse the replies.

On a parse failure the engine re-asks once with the parse error appended to
the prompt, then surfaces the error. Builders and parsers are stateless;
the engine only holds the provider handle.
"""

from __future__ import annotations

from ..errors import ParseError
from ..providers.base import ImageRef, MllmProvider, MllmRequest
from .builders import DESCRIPTION_TEMPERATURE, SELECTOR_TEMPERATURE, RenderedPrompt
from .parsing import (
    parse_choice,
    parse_destination,
    parse_direction_description,
    parse_keywords,
    parse_place_type,
    parse_triple,
)
from .types import DescriptionTriple, DestinationDetail, DirectionChoice

_REASK_SUFFIX = (
    "\n\n[Correction]\n"
    "Your previous response could not be parsed: {error}. "
    "Respond again using strictly the required JSON format and nothing else."
)


class PromptEngine:
    def __init__(self, mllm: MllmProvider, *, max_tokens: int = 1024):
        self._mllm = mllm
        self._max_tokens = max_tokens

    def _complete(self, prompt: RenderedPrompt, images: tuple[ImageRef, ...], temperature: float) -> str:
        return self._mllm.complete(
            MllmRequest(
                template_id=prompt.template_id,
                system_and_user_text=prompt.text,
                images=images,
                max_tokens=self._max_tokens,
                temperature=temperature,
            )
        )

    def _ask(self, prompt, images, parse, temperature):
        raw = self._complete(prompt, images, temperature)
        try:
            return parse(raw)
        except ParseError as err:
            retry_prompt = RenderedPrompt(prompt.template_id, prompt.text + _REASK_SUFFIX.format(error=err))
            raw = self._complete(retry_prompt, images, temperature)
            return parse(raw)

    def ask_triple(self, prompt: RenderedPrompt, images: tuple[ImageRef, ...]) -> DescriptionTriple:
        return self._ask(prompt, images, parse_triple, DESCRIPTION_TEMPERATURE)

    def ask_destination(self, prompt: RenderedPrompt, images: tuple[ImageRef, ...]) -> DestinationDetail:
        return self._ask(prompt, images, parse_destination, DESCRIPTION_TEMPERATURE)

    def ask_direction_description(self, prompt: RenderedPrompt, images: tuple[ImageRef, ...]) -> str:
        return self._ask(prompt, images, parse_direction_description, DESCRIPTION_TEMPERATURE)

    def ask_choice(
        self, prompt: RenderedPrompt, images: tuple[ImageRef, ...], candidate_count: int
    ) -> DirectionChoice:
        return self._ask(prompt, images, lambda raw: parse_choice(raw, candidate_count), SELECTOR_TEMPERATURE)

    def ask_keywords(self, prompt: RenderedPrompt) -> list[str]:
        return self._ask(prompt, (), parse_keywords, DESCRIPTION_TEMPERATURE)

    def ask_place_type(self, prompt: RenderedPrompt) -> str:
        return self._ask(prompt, (), parse_place_type, DESCRIPTION_TEMPERATURE)
