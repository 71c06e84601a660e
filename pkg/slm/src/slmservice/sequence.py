"""Fixed-arity input construction: four slots, three separators.

The headline and justification slots are never truncated; the body absorbs
all truncation first, then the image summary. Empty slots keep their
separator so the arity is constant.
"""

from .records import DistillRecord

SLOT_ORDER = ("headline", "body_preprocessed", "image_summary", "justification")
_SAFETY_MARGIN = 8


def _sanitize(text: str, sep_token: str) -> str:
    # a separator string inside a slot would break the arity invariant
    return text.replace(sep_token, " ").strip()


def build_input_sequence(
    record: DistillRecord,
    sep_token: str = "</s>",
    tokenizer=None,
    max_length: int | None = None,
) -> str:
    """Concatenate the four slots with exactly three separator tokens.

    With a tokenizer and max_length, slots are pre-truncated so the encoded
    sequence fits: body first, image summary second, headline and
    justification whole.
    """
    slots = [_sanitize(getattr(record, name), sep_token) for name in SLOT_ORDER]

    if tokenizer is not None and max_length is not None:
        def encoded(text):
            return tokenizer.encode(text, add_special_tokens=False) if text else []

        sep_cost = len(encoded(sep_token))
        budget = (
            max_length
            - tokenizer.num_special_tokens_to_add()
            - 3 * sep_cost
            - _SAFETY_MARGIN
        )
        token_slots = [encoded(s) for s in slots]
        overflow = sum(len(t) for t in token_slots) - budget
        for victim in (1, 2):  # body, then image summary
            if overflow <= 0:
                break
            keep = max(0, len(token_slots[victim]) - overflow)
            overflow -= len(token_slots[victim]) - keep
            token_slots[victim] = token_slots[victim][:keep]
            slots[victim] = tokenizer.decode(token_slots[victim]).strip()

    return f" {sep_token} ".join(slots)
