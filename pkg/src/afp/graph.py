"""Semantic graph model, compact textualization, and the fallback generator.

A graph is a node list plus (subject, relation, object) triplets. It is
normally repurposed from an upstream selector's intermediate output (a
small JSON file); when none exists it can be requested from an external
chat endpoint using only the question and answer options. Both failure
modes of that endpoint degrade to a graph-less run.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .errors import AfpWarning, MalformedResponseError, ParseError, TransportError, ValidationError

API_KEY_ENV_VAR = "AFP_LLM_API_KEY"

FALLBACK_INSTRUCTION = (
    "List the key entities mentioned or implied by the question and options "
    "below, and their most plausible relationships. Reply with only a JSON "
    'object of the form {"nodes": ["..."], "triplets": [["subject", '
    '"relation", "object"], ...]}.'
)


@dataclass(frozen=True)
class SemanticGraph:
    nodes: tuple[str, ...] = ()
    triplets: tuple[tuple[str, str, str], ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.nodes and not self.triplets


@dataclass(frozen=True)
class GraphSource:
    """Where the graph comes from: a sidecar file or the LLM fallback."""

    kind: str = "repurposed_file"
    endpoint: str | None = None

    def __post_init__(self):
        if self.kind not in ("repurposed_file", "llm_fallback"):
            raise ValidationError(f"unknown graph source kind {self.kind!r}")
        if self.kind == "llm_fallback" and not self.endpoint:
            raise ValidationError("llm_fallback graph source needs an endpoint")


def graph_from_dict(doc) -> SemanticGraph:
    """Validate a decoded graph document.

    Triplet endpoints missing from the node list are appended (with a
    warning); duplicate nodes or triplets are dropped, keeping the first
    occurrence.
    """
    if not isinstance(doc, dict):
        raise ParseError(f"graph document must be a JSON object, got {type(doc).__name__}")
    raw_nodes = doc.get("nodes", [])
    raw_triplets = doc.get("triplets", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_triplets, list):
        raise ParseError('"nodes" and "triplets" must be lists')

    nodes: list[str] = []
    for node in raw_nodes:
        if not isinstance(node, str) or not node:
            raise ValidationError(f"graph nodes must be non-empty strings, got {node!r}")
        if node in nodes:
            warnings.warn(f"dropping duplicate node {node!r}", AfpWarning)
        else:
            nodes.append(node)

    triplets: list[tuple[str, str, str]] = []
    for entry in raw_triplets:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
            raise ParseError(f"triplets must be [subject, relation, object] triples, got {entry!r}")
        s, r, o = entry
        for part in (s, r, o):
            if not isinstance(part, str) or not part:
                raise ValidationError(f"triplet parts must be non-empty strings, got {entry!r}")
        trip = (s, r, o)
        if trip in triplets:
            warnings.warn(f"dropping duplicate triplet {trip!r}", AfpWarning)
            continue
        triplets.append(trip)
        for endpoint in (s, o):
            if endpoint not in nodes:
                warnings.warn(
                    f"triplet endpoint {endpoint!r} missing from node list; adding it",
                    AfpWarning,
                )
                nodes.append(endpoint)

    return SemanticGraph(nodes=tuple(nodes), triplets=tuple(triplets))


def load_graph(path: str | Path) -> SemanticGraph:
    """Load a graph document: {"nodes": [...], "triplets": [[s, r, o], ...]}."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read graph {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"graph {path} is not valid JSON: {exc}") from exc
    return graph_from_dict(doc)


def graph_to_dict(graph: SemanticGraph) -> dict:
    return {"nodes": list(graph.nodes), "triplets": [list(t) for t in graph.triplets]}


def textualize_g1(graph: SemanticGraph) -> str:
    """Compact text form: a node roster plus one raw triplet per line.

    Node and triplet order is preserved, so equal graphs always serialize
    to identical bytes. An empty graph serializes to the empty string.
    """
    if graph.is_empty:
        return ""
    lines = ["Semantic graph:", "Nodes: " + ", ".join(graph.nodes)]
    lines.extend(f"({s}, {r}, {o})" for s, r, o in graph.triplets)
    return "\n".join(lines)


class ChatClient(Protocol):
    """Anything that can answer one text prompt with one text reply."""

    def complete(self, prompt: str) -> str: ...


@dataclass
class HttpChatClient:
    """Single-request chat transport against a generic completion endpoint.

    Sends ``POST endpoint`` with body ``{"message": <prompt>}`` and a bearer
    token from the ``AFP_LLM_API_KEY`` environment variable (when set). The
    reply body must be the graph JSON document itself, or a JSON object
    whose ``"text"`` field contains it.
    """

    endpoint: str
    timeout: float = 30.0
    api_key: str | None = field(default=None, repr=False)

    def complete(self, prompt: str) -> str:
        key = self.api_key if self.api_key is not None else os.environ.get(API_KEY_ENV_VAR)
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        try:
            resp = requests.post(
                self.endpoint,
                json={"message": prompt},
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(f"graph endpoint {self.endpoint} unreachable: {exc}") from exc
        if not 200 <= resp.status_code < 300:
            raise TransportError(
                f"graph endpoint {self.endpoint} returned HTTP {resp.status_code}"
            )
        return resp.text


def fallback_prompt(question: str, options: Sequence[str]) -> str:
    lines = [FALLBACK_INSTRUCTION, f"Question: {question}"]
    if options:
        lines.append("Options:")
        lines.extend(f"- {opt}" for opt in options)
    return "\n".join(lines)


def generate_graph_fallback(question: str, options: Sequence[str], client: ChatClient) -> SemanticGraph:
    """Ask an external endpoint to infer a graph from the QA text alone.

    Exactly one request is made, carrying only the question and options
    (never image data). Raises TransportError if the endpoint cannot be
    reached and MalformedResponseError if the reply does not parse as a
    graph document.
    """
    if not question:
        raise ValidationError("fallback graph generation needs a non-empty question")
    reply = client.complete(fallback_prompt(question, options))
    try:
        doc = json.loads(reply)
    except json.JSONDecodeError as exc:
        raise MalformedResponseError(f"endpoint reply is not JSON: {exc}") from exc
    if isinstance(doc, dict) and "text" in doc and "nodes" not in doc:
        inner = doc["text"]
        if not isinstance(inner, str):
            raise MalformedResponseError('reply "text" field is not a string')
        try:
            doc = json.loads(inner)
        except json.JSONDecodeError as exc:
            raise MalformedResponseError(f'reply "text" field is not JSON: {exc}') from exc
    try:
        return graph_from_dict(doc)
    except (ParseError, ValidationError) as exc:
        raise MalformedResponseError(f"endpoint reply is not a graph document: {exc}") from exc
