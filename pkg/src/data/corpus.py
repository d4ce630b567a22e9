"""JSON-lines corpus files: meetings, articles and role tables."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from src.data.schema import NONE_TAG, Article, Meeting, Turn
from src.data.vocab import RoleTable
from src.exceptions import EmptyArticle, SchemaError

logger = logging.getLogger(__name__)

Record = Union[str, Dict[str, Any]]


def _load_record(line: Record) -> Dict[str, Any]:
    if isinstance(line, dict):
        return line
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise SchemaError(f"record is not valid JSON: {e}") from e
    if not isinstance(record, dict):
        raise SchemaError("record must be a JSON object")
    return record


def _token_list(value, what: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
        raise SchemaError(f"{what} must be a list of strings")
    return list(value)


def parse_meeting(line: Record) -> Meeting:
    """
    Parse and validate one meeting record.

    Missing ``pos``/``ent`` lists are filled with the NONE tag.

    Raises:
        SchemaError: Missing id/role/tokens, parallel lists of different
            lengths, empty turns, or zero turns
    """
    record = _load_record(line)
    if not isinstance(record.get("id"), str):
        raise SchemaError("meeting record needs a string 'id'")
    raw_turns = record.get("turns")
    if not isinstance(raw_turns, list) or not raw_turns:
        raise SchemaError(f"meeting {record['id']} needs at least one turn")

    turns = []
    for i, raw in enumerate(raw_turns):
        where = f"meeting {record['id']} turn {i}"
        if not isinstance(raw, dict):
            raise SchemaError(f"{where} must be an object")
        if not isinstance(raw.get("role"), str) or not raw["role"]:
            raise SchemaError(f"{where} is missing 'role'")
        if "tokens" not in raw:
            raise SchemaError(f"{where} is missing 'tokens'")
        tokens = _token_list(raw["tokens"], f"{where} tokens")
        if not tokens:
            raise SchemaError(f"{where} has no tokens")
        pos = _token_list(raw.get("pos", [NONE_TAG] * len(tokens)), f"{where} pos")
        ent = _token_list(raw.get("ent", [NONE_TAG] * len(tokens)), f"{where} ent")
        if not len(tokens) == len(pos) == len(ent):
            raise SchemaError(
                f"{where} has {len(tokens)} tokens, {len(pos)} pos tags, {len(ent)} ent tags"
            )
        turns.append(Turn(role=raw["role"], tokens=tokens, pos_tags=pos, ent_tags=ent))

    summary = _token_list(record.get("summary", []), f"meeting {record['id']} summary")
    return Meeting(id=record["id"], turns=turns, summary=summary)


def meeting_to_record(meeting: Meeting) -> Dict[str, Any]:
    return {
        "id": meeting.id,
        "turns": [
            {"role": t.role, "tokens": t.tokens, "pos": t.pos_tags, "ent": t.ent_tags}
            for t in meeting.turns
        ],
        "summary": meeting.summary,
    }


def serialize_meeting(meeting: Meeting) -> str:
    return json.dumps(meeting_to_record(meeting), ensure_ascii=False, separators=(",", ":"))


def canonicalize(line: Record) -> str:
    """Canonical text of a record: fixed key order, tags filled, compact JSON."""
    record = _load_record(line)
    turns = []
    for raw in record.get("turns", []):
        n = len(raw.get("tokens", []))
        turns.append({
            "role": raw.get("role"),
            "tokens": raw.get("tokens", []),
            "pos": raw.get("pos", [NONE_TAG] * n),
            "ent": raw.get("ent", [NONE_TAG] * n),
        })
    canonical = {"id": record.get("id"), "turns": turns, "summary": record.get("summary", [])}
    return json.dumps(canonical, ensure_ascii=False, separators=(",", ":"))


def parse_article(line: Record) -> Article:
    record = _load_record(line)
    if not isinstance(record.get("source_name"), str) or not record["source_name"]:
        raise SchemaError("article record needs a 'source_name'")
    sentences = record.get("sentences")
    if not isinstance(sentences, list) or not sentences:
        raise EmptyArticle(f"article from {record['source_name']} has no sentences")
    sentences = [_token_list(s, "article sentence") for s in sentences]
    if any(not s for s in sentences):
        raise EmptyArticle(f"article from {record['source_name']} has an empty sentence")
    summary = _token_list(record.get("summary", []), "article summary")
    return Article(source_name=record["source_name"], sentences=sentences, summary=summary)


def serialize_article(article: Article) -> str:
    return json.dumps(
        {"source_name": article.source_name, "sentences": article.sentences, "summary": article.summary},
        ensure_ascii=False,
        separators=(",", ":"),
    )


def _read_lines(path: Union[str, Path]) -> List[str]:
    with open(path, "r", encoding="utf-8") as f:
        return [line for line in f if line.strip()]


def read_meetings(path: Union[str, Path]) -> List[Meeting]:
    meetings = []
    for number, line in enumerate(_read_lines(path), start=1):
        try:
            meetings.append(parse_meeting(line))
        except SchemaError as e:
            raise SchemaError(f"{path}:{number}: {e}") from e
    logger.info("Read %d meetings from %s", len(meetings), path)
    return meetings


def write_meetings(meetings: Sequence[Meeting], path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for meeting in meetings:
            f.write(serialize_meeting(meeting) + "\n")


def read_articles(path: Union[str, Path]) -> List[Article]:
    articles = [parse_article(line) for line in _read_lines(path)]
    logger.info("Read %d articles from %s", len(articles), path)
    return articles


def write_articles(articles: Sequence[Article], path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for article in articles:
            f.write(serialize_article(article) + "\n")


def read_role_table(path: Union[str, Path]) -> RoleTable:
    """Newline-separated role names; line number (from 0) is the role id."""
    with open(path, "r", encoding="utf-8") as f:
        return RoleTable([line.strip() for line in f if line.strip()])


def write_role_table(table: RoleTable, path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("".join(role + "\n" for role in table.roles))
