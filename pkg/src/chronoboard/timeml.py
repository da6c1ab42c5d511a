"""TimeML-style document parsing and single-sentence window extraction.

Supports the TempEval-3 subset: TEXT with inline EVENT/TIMEX3 tags,
MAKEINSTANCE bindings, TLINKs over event instances and timexes, and a
creation-time TIMEX3.  Character offsets are computed over the TEXT content
with tags stripped.  Windows are single sentences prefixed with the
document creation time so it can be annotated like any other entity.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .board import Entity, IntervalRelation, Kind
from .errors import DanglingReference, MalformedXML, MissingDCT, UnknownRelType

DCT_PREFIX = "Document creation time: "

# Final-period tokens that do not end a sentence.
ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "gen", "sen", "rep", "gov", "col",
    "sgt", "lt", "jr", "sr", "st", "inc", "ltd", "co", "corp", "vs",
    "etc", "no", "vol", "fig", "jan", "feb", "mar", "apr", "jun", "jul",
    "aug", "sep", "sept", "oct", "nov", "dec", "u.s", "u.n", "u.k",
    "a.m", "p.m", "e.g", "i.e",
}


@dataclass(frozen=True)
class EventTag:
    eid: str
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class TimexTag:
    tid: str
    start: int
    end: int
    value: str
    text: str


@dataclass(frozen=True)
class TLink:
    lid: str
    source: str
    target: str
    relation: IntervalRelation


@dataclass
class TimeMLDoc:
    doc_id: str
    dct_value: str
    dct_timex_id: str
    text: str
    events: list[EventTag] = field(default_factory=list)
    timexes: list[TimexTag] = field(default_factory=list)
    instances: dict[str, str] = field(default_factory=dict)
    tlinks: list[TLink] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "dct_value": self.dct_value,
            "dct_timex_id": self.dct_timex_id,
            "text": self.text,
            "events": [
                {"eid": e.eid, "start": e.start, "end": e.end, "text": e.text}
                for e in self.events
            ],
            "timexes": [
                {"tid": t.tid, "start": t.start, "end": t.end,
                 "value": t.value, "text": t.text}
                for t in self.timexes
            ],
            "instances": dict(self.instances),
            "tlinks": [
                {"lid": l.lid, "source": l.source, "target": l.target,
                 "relation": l.relation.value}
                for l in self.tlinks
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TimeMLDoc":
        return cls(
            doc_id=d["doc_id"],
            dct_value=d["dct_value"],
            dct_timex_id=d["dct_timex_id"],
            text=d["text"],
            events=[EventTag(**e) for e in d["events"]],
            timexes=[TimexTag(**t) for t in d["timexes"]],
            instances=dict(d["instances"]),
            tlinks=[
                TLink(l["lid"], l["source"], l["target"],
                      IntervalRelation(l["relation"]))
                for l in d["tlinks"]
            ],
        )


@dataclass
class SentenceWindow:
    doc_id: str
    sentence_index: int
    text: str
    entities: list[Entity]
    gold_links: list[tuple[str, str, IntervalRelation]]


def parse_timeml(raw: str, default_doc_id: str = "") -> TimeMLDoc:
    """Parse one TimeML document; offsets index the tag-stripped TEXT content."""
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        raise MalformedXML(f"not well-formed XML: {exc}") from exc

    doc_id = default_doc_id
    docid_el = root.find(".//DOCID")
    if docid_el is not None and docid_el.text:
        doc_id = docid_el.text.strip()

    text_el = root.find(".//TEXT")
    if text_el is None:
        raise MalformedXML("document has no TEXT element")

    parts: list[str] = []
    pos = 0
    events: list[EventTag] = []
    timexes: list[TimexTag] = []

    def emit(chunk: str | None) -> None:
        nonlocal pos
        if chunk:
            parts.append(chunk)
            pos += len(chunk)

    emit(text_el.text)
    for child in text_el:
        content = "".join(child.itertext())
        if child.tag == "EVENT":
            events.append(EventTag(child.get("eid", ""), pos, pos + len(content), content))
        elif child.tag == "TIMEX3":
            timexes.append(
                TimexTag(child.get("tid", ""), pos, pos + len(content),
                         child.get("value", ""), content)
            )
        emit(content)
        emit(child.tail)
    text = "".join(parts)

    dct_candidates = [
        el for el in root.iter("TIMEX3")
        if el.get("functionInDocument") == "CREATION_TIME"
    ]
    if not dct_candidates:
        raise MissingDCT("no TIMEX3 with functionInDocument=CREATION_TIME")
    if len(dct_candidates) > 1:
        raise MalformedXML("multiple CREATION_TIME timexes")
    dct = dct_candidates[0]
    dct_value = dct.get("value") or "".join(dct.itertext()).strip()
    dct_timex_id = dct.get("tid", "t0")

    instances: dict[str, str] = {}
    known_eids = {e.eid for e in events}
    for mk in root.iter("MAKEINSTANCE"):
        eiid = mk.get("eiid", "")
        eid = mk.get("eventID", "")
        if eid not in known_eids:
            raise DanglingReference(f"MAKEINSTANCE {eiid!r} references unknown event {eid!r}")
        instances[eiid] = eid

    known_tids = {t.tid for t in timexes} | {dct_timex_id}

    ref_kind = {
        "eventInstanceID": "instance",
        "relatedToEventInstance": "instance",
        "timeID": "time",
        "relatedToTime": "time",
        "eventID": "event",
        "relatedToEvent": "event",
    }

    def resolve(el: ET.Element, attrs: tuple[str, ...]) -> str:
        for attr in attrs:
            value = el.get(attr)
            if value is None:
                continue
            kind = ref_kind[attr]
            if kind == "instance":
                if value not in instances:
                    raise DanglingReference(f"TLINK references unknown instance {value!r}")
                return instances[value]
            if kind == "time":
                if value not in known_tids:
                    raise DanglingReference(f"TLINK references unknown timex {value!r}")
                return value
            if value not in known_eids:
                raise DanglingReference(f"TLINK references unknown event {value!r}")
            return value
        raise DanglingReference("TLINK is missing a source/target reference")

    tlinks: list[TLink] = []
    for tl in root.iter("TLINK"):
        rel_raw = tl.get("relType", "")
        try:
            relation = IntervalRelation(rel_raw)
        except ValueError:
            raise UnknownRelType(f"unknown TLINK relType {rel_raw!r}") from None
        source = resolve(tl, ("eventInstanceID", "timeID", "eventID"))
        target = resolve(tl, ("relatedToEventInstance", "relatedToTime", "relatedToEvent"))
        tlinks.append(TLink(tl.get("lid", ""), source, target, relation))

    return TimeMLDoc(doc_id, dct_value, dct_timex_id, text, events, timexes,
                     instances, tlinks)


def _protected(spans: list[tuple[int, int]], idx: int) -> bool:
    return any(start <= idx < end for start, end in spans)


def _token_before(text: str, idx: int) -> str:
    j = idx
    while j > 0 and (text[j - 1].isalnum() or text[j - 1] == "."):
        j -= 1
    return text[j:idx].strip(".").lower()


def sentence_spans(text: str, protected: list[tuple[int, int]] | None = None) -> list[tuple[int, int]]:
    """Rule-based sentence boundaries as (start, end) spans.

    Splits after . ! ? followed by whitespace and an uppercase letter,
    guarded by a closed abbreviation list, and never inside a protected
    span (entity annotations must stay whole).
    """
    protected = protected or []
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?" and not _protected(protected, i):
            if ch != "." or _token_before(text, i) not in ABBREVIATIONS:
                j = i + 1
                if j < n and text[j].isspace():
                    k = j
                    while k < n and text[k].isspace():
                        k += 1
                    if k < n and text[k].isupper():
                        spans.append((start, i + 1))
                        start = k
                        i = k
                        continue
        i += 1
    if start < n:
        spans.append((start, n))
    cleaned = []
    for s, e in spans:
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if s < e:
            cleaned.append((s, e))
    return cleaned


def split_sentences(doc: TimeMLDoc) -> list[SentenceWindow]:
    """Cut the document into creation-time-prefixed single-sentence windows.

    Each window starts with ``Document creation time: <value> `` followed by
    the sentence; the creation time becomes the window's first entity and
    in-sentence entities are re-based onto the window text.  Gold links are
    kept when both endpoints (creation time included) are window entities.
    """
    tag_spans = [(e.start, e.end) for e in doc.events] + [
        (t.start, t.end) for t in doc.timexes
    ]
    prefix = f"{DCT_PREFIX}{doc.dct_value} "
    dct_entity = Entity(
        id=doc.dct_timex_id,
        text=doc.dct_value,
        start=len(DCT_PREFIX),
        end=len(DCT_PREFIX) + len(doc.dct_value),
        kind=Kind.INTERVAL,
        is_dct=True,
    )

    windows: list[SentenceWindow] = []
    for index, (s, e) in enumerate(sentence_spans(doc.text, tag_spans)):
        tags: list[tuple[int, str, str]] = []
        for ev in doc.events:
            if s <= ev.start and ev.end <= e:
                tags.append((ev.start, ev.eid, ev.text))
        for tx in doc.timexes:
            if s <= tx.start and tx.end <= e:
                tags.append((tx.start, tx.tid, tx.text))
        tags.sort()
        entities = [dct_entity] + [
            Entity(
                id=tag_id,
                text=surface,
                start=start - s + len(prefix),
                end=start - s + len(prefix) + len(surface),
                kind=Kind.INTERVAL,
            )
            for start, tag_id, surface in tags
        ]
        ids = {ent.id for ent in entities}
        gold = [
            (tl.source, tl.target, tl.relation)
            for tl in doc.tlinks
            if tl.source != tl.target and tl.source in ids and tl.target in ids
        ]
        windows.append(
            SentenceWindow(
                doc_id=doc.doc_id,
                sentence_index=index,
                text=prefix + doc.text[s:e],
                entities=entities,
                gold_links=gold,
            )
        )
    return windows
