"""Strategies for running a materialized prompt sequence against a gateway.

Five strategies are supported: the last question alone (lastq), all
questions in one turn (allq), the same with a chain-of-thought suffix
(allqcot), a scripted reasoning scaffold (allqreact), and one guided
turn per step (gitq).  Whatever the strategy, the final reply is split
into a knowledge document of one to three labeled parts.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field

from .errors import (
    EmptyDocumentError,
    EmptyReplyError,
    GatewayError,
    MalformedFinalAnswerError,
    MissingBindingError,
    NoPartsWarning,
    TooFewStepsError,
)
from .gateway import ChatMessage
from .planning import PromptSequence
from .presets import COT_SUFFIX, REACT_FINAL_BLOCK, REACT_FORMAT_BLOCK, REACT_HEADER
from .prompts import PromptRegistry, RoleProfile, default_registry, instantiate

__all__ = [
    "STRATEGIES",
    "PART_LABELS",
    "ManualClock",
    "TranscriptMessage",
    "Transcript",
    "KnowledgePart",
    "KnowledgeDocument",
    "wrap_react",
    "parse_react_reply",
    "split_parts",
    "render_knowledge",
    "execute",
    "serialize_transcript",
    "parse_transcript",
]

STRATEGIES = ("lastq", "allq", "allqcot", "allqreact", "gitq")

PART_LABELS = ("asset-description", "kpi-explanation", "measurement")


class ManualClock:
    """Deterministic logical clock; default for scripted and replayed runs."""

    def __init__(self, start: float = 0.0, step: float = 1.0):
        self._now = start
        self._step = step

    def __call__(self) -> float:
        now = self._now
        self._now += self._step
        return now


@dataclass(frozen=True)
class TranscriptMessage:
    role: str
    content: str
    steps: tuple[int, ...]  # sequence steps this message carries or answers
    timestamp: float


@dataclass
class Transcript:
    strategy: str
    messages: list[TranscriptMessage] = field(default_factory=list)

    def user_turns(self) -> list[TranscriptMessage]:
        return [m for m in self.messages if m.role == "user"]

    def replies(self) -> list[TranscriptMessage]:
        return [m for m in self.messages if m.role == "assistant"]


def serialize_transcript(transcript: Transcript) -> str:
    lines = [json.dumps({"strategy": transcript.strategy}, ensure_ascii=False)]
    for m in transcript.messages:
        lines.append(json.dumps(
            {"role": m.role, "content": m.content, "steps": list(m.steps), "timestamp": m.timestamp},
            ensure_ascii=False,
        ))
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> Transcript:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise EmptyDocumentError("transcript document is empty")
    header = json.loads(lines[0])
    transcript = Transcript(strategy=header["strategy"])
    for line in lines[1:]:
        record = json.loads(line)
        transcript.messages.append(TranscriptMessage(
            record["role"], record["content"], tuple(record["steps"]), record["timestamp"],
        ))
    return transcript


# --- knowledge documents ------------------------------------------------------

@dataclass(frozen=True)
class KnowledgePart:
    label: str
    heading: str  # raw heading line including its newline; empty when headingless
    body: str

    @property
    def text(self) -> str:
        return self.heading + self.body


@dataclass
class KnowledgeDocument:
    parts: tuple[KnowledgePart, ...]
    preamble: str = ""
    source_transcript: Transcript | None = None

    def part(self, label: str) -> KnowledgePart:
        for p in self.parts:
            if p.label == label:
                return p
        raise KeyError(label)


_HEADING_LINE = re.compile(r"^(?:#{1,2}\s+\S.*|(?:\*\*)?Part\s*[1-9]\d*\b.*)$", re.IGNORECASE)


def split_parts(text: str) -> KnowledgeDocument:
    """Split reply markdown into at most three labeled parts.

    Boundaries are "Part N" marker lines or the first three H1/H2
    headings, in order of appearance.  Heading-free text becomes a
    single asset-description part, with a warning.  The original text is
    reconstructable from preamble + parts.
    """
    if not text or not text.strip():
        raise EmptyDocumentError("knowledge text is empty")
    lines = text.splitlines(keepends=True)
    boundaries = [
        i for i, line in enumerate(lines) if _HEADING_LINE.match(line.rstrip("\r\n"))
    ][:3]
    if not boundaries:
        warnings.warn(NoPartsWarning("no part headings found; treating text as one part"))
        return KnowledgeDocument(parts=(KnowledgePart(PART_LABELS[0], "", text),))
    preamble = "".join(lines[: boundaries[0]])
    parts = []
    for n, start in enumerate(boundaries):
        end = boundaries[n + 1] if n + 1 < len(boundaries) else len(lines)
        parts.append(KnowledgePart(
            label=PART_LABELS[n],
            heading=lines[start],
            body="".join(lines[start + 1 : end]),
        ))
    return KnowledgeDocument(parts=tuple(parts), preamble=preamble)


def render_knowledge(kd: KnowledgeDocument) -> str:
    return kd.preamble + "".join(p.text for p in kd.parts)


# --- strategy plumbing -----------------------------------------------------------

def wrap_react(seq: PromptSequence) -> str:
    """Single user prompt: enumerated questions, the reasoning format block,
    and the final request framed as a Final Answer."""
    if len(seq.steps) < 2:
        raise TooFewStepsError("the reasoning scaffold needs at least two steps")
    questions = "\n".join(
        f"Question {s.index}: {s.body}" for s in seq.steps[:-1]
    )
    final = REACT_FINAL_BLOCK.format(final_request=seq.steps[-1].body)
    return "\n\n".join([REACT_HEADER, questions, REACT_FORMAT_BLOCK, final])


_TRIPLE = re.compile(
    r"Question:\s*(.*?)\s*Thought:\s*(.*?)\s*Answer:\s*(.*?)"
    r"(?=\n\s*Question:|\n\s*Thought:\s*Now I know|\n\s*Final Answer:|\Z)",
    re.DOTALL,
)
_FINAL_ANSWER = re.compile(r"Final Answer:\s*", re.IGNORECASE)


@dataclass(frozen=True)
class ReactReply:
    final_answer: str
    triples: tuple[tuple[str, str, str], ...]


def parse_react_reply(text: str) -> ReactReply:
    """Extract the Question/Thought/Answer triples and the text after the
    last Final Answer marker."""
    markers = list(_FINAL_ANSWER.finditer(text))
    if not markers:
        raise MalformedFinalAnswerError("reply has no Final Answer marker")
    final_answer = text[markers[-1].end():].strip()
    scaffold = text[: markers[-1].start()]
    triples = tuple(
        (q.strip(), t.strip(), a.strip()) for q, t, a in _TRIPLE.findall(scaffold)
    )
    return ReactReply(final_answer=final_answer, triples=triples)


# --- execution --------------------------------------------------------------------

def _system_content(seq: PromptSequence, role: RoleProfile, registry: PromptRegistry) -> str:
    template = registry.resolve_role(role)
    needed = template.required_placeholders
    if not needed:
        return template.body
    missing = needed - seq.bindings.keys()
    if missing:
        raise MissingBindingError(missing, context=template.id)
    return instantiate(template, {k: seq.bindings[k] for k in needed})


def execute(
    seq: PromptSequence,
    strategy: str,
    role: RoleProfile,
    gateway,
    registry: PromptRegistry | None = None,
    clock=None,
) -> tuple[KnowledgeDocument, Transcript]:
    """Run the sequence under one strategy and split the outcome into a
    knowledge document.

    The sequence must be fully materialized and must end with an export
    step.  With a scripted gateway the transcript is deterministic.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if not seq.steps:
        raise ValueError("cannot execute an empty sequence")
    if seq.placeholders:
        raise ValueError(
            "sequence still has unbound placeholders: " + ", ".join(sorted(seq.placeholders))
        )
    if seq.steps[-1].kind != "export":
        raise ValueError("the last step must be an export step")

    registry = registry or default_registry()
    clock = clock or ManualClock()
    system = ChatMessage("system", _system_content(seq, role, registry))
    transcript = Transcript(strategy=strategy)
    transcript.messages.append(TranscriptMessage("system", system.content, (), clock()))
    all_steps = tuple(s.index for s in seq.steps)

    def ask(session: list[ChatMessage], steps: tuple[int, ...]) -> str:
        transcript.messages.append(
            TranscriptMessage("user", session[-1].content, steps, clock())
        )
        try:
            reply = gateway.complete(session)
        except GatewayError as exc:
            exc.step_index = steps[-1] if steps else None
            raise
        if not reply.strip():
            raise EmptyReplyError(f"gateway returned an empty reply for step(s) {steps}")
        transcript.messages.append(TranscriptMessage("assistant", reply, steps, clock()))
        return reply

    if strategy == "lastq":
        content = seq.steps[-1].body
        reply = ask([system, ChatMessage("user", content)], (seq.steps[-1].index,))
        answer = reply
    elif strategy in ("allq", "allqcot"):
        content = "\n\n".join(f"Step {s.index}: {s.body}" for s in seq.steps)
        if strategy == "allqcot":
            content = content + "\n\n" + COT_SUFFIX
        reply = ask([system, ChatMessage("user", content)], all_steps)
        answer = reply
    elif strategy == "allqreact":
        content = wrap_react(seq)
        reply = ask([system, ChatMessage("user", content)], all_steps)
        answer = parse_react_reply(reply).final_answer
        if not answer:
            raise MalformedFinalAnswerError("Final Answer marker carries no text")
    else:  # gitq
        session: list[ChatMessage] = [system]
        reply = ""
        for step in seq.steps:
            session.append(ChatMessage("user", step.body))
            reply = ask(session, (step.index,))
            session.append(ChatMessage("assistant", reply))
        answer = reply

    kd = split_parts(answer)
    kd.source_transcript = transcript
    return kd, transcript
