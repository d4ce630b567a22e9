"""Per-document scoring, corpus means and report/table files."""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.data.schema import Meeting
from src.evaluation.novelty import novel_ngram_ratio
from src.evaluation.rouge import METRICS, RougeScore, rouge_all
from src.exceptions import TooShort
from src.interfaces.isummarizer import ISummarizer

logger = logging.getLogger(__name__)

NOVEL_ORDERS = (1, 2, 3, 4)


@dataclass
class DocumentScores:
    doc_id: str
    rouge: Dict[str, RougeScore]
    # None where the summary is shorter than n
    novel: Dict[int, Optional[float]] = field(default_factory=dict)

    def as_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"doc_id": self.doc_id}
        for metric in METRICS:
            score = self.rouge[metric]
            row[f"{metric}_p"] = score.precision
            row[f"{metric}_r"] = score.recall
            row[f"{metric}_f"] = score.f1
        for n in NOVEL_ORDERS:
            value = self.novel.get(n)
            row[f"novel_{n}"] = np.nan if value is None else value
        return row


def score_document(
    doc_id: str, candidate: Sequence[str], reference: Sequence[str], transcript: Sequence[str]
) -> DocumentScores:
    novel: Dict[int, Optional[float]] = {}
    for n in NOVEL_ORDERS:
        try:
            novel[n] = novel_ngram_ratio(candidate, transcript, n)
        except TooShort:
            novel[n] = None
    return DocumentScores(doc_id, rouge_all(candidate, reference), novel)


def scores_frame(documents: Sequence[DocumentScores]) -> pd.DataFrame:
    return pd.DataFrame([doc.as_row() for doc in documents])


def corpus_means(frame: pd.DataFrame) -> Dict[str, float]:
    """Macro averages over documents; undefined novelty values are skipped."""
    means = frame.drop(columns=["doc_id"]).mean(numeric_only=True, skipna=True)
    return {column: (None if pd.isna(value) else float(value)) for column, value in means.items()}


def evaluate_system(
    system: ISummarizer, meetings: Sequence[Meeting]
) -> List[DocumentScores]:
    """Summarize every meeting with ``system`` and score it against the reference."""
    documents = []
    for meeting in meetings:
        candidate = system.summarize(meeting)
        documents.append(score_document(meeting.id, candidate, meeting.summary,
                                        meeting.transcript_tokens()))
    logger.info(f"Scored {system.get_name()} on {len(documents)} meetings")
    return documents


def score_summaries(
    summaries: Dict[str, List[str]], meetings: Sequence[Meeting]
) -> List[DocumentScores]:
    """Score precomputed summaries keyed by meeting id."""
    documents = []
    for meeting in meetings:
        if meeting.id not in summaries:
            logger.warning(f"No summary for meeting {meeting.id}; scoring an empty summary")
        documents.append(score_document(meeting.id, summaries.get(meeting.id, []),
                                        meeting.summary, meeting.transcript_tokens()))
    return documents


def build_report(
    system_name: str, documents: Sequence[DocumentScores], baselines: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    frame = scores_frame(documents)
    report: Dict[str, Any] = {
        "system": system_name,
        "n_documents": len(documents),
        "corpus": corpus_means(frame) if len(frame) else {},
        "documents": [
            {
                "doc_id": doc.doc_id,
                **{metric: doc.rouge[metric].as_dict() for metric in METRICS},
                "novel_ngrams": {str(n): doc.novel.get(n) for n in NOVEL_ORDERS},
            }
            for doc in documents
        ],
    }
    if baselines:
        report["baselines"] = baselines
    return report


def write_report(report: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    logger.info(f"Wrote evaluation report to {path}")
    return path


def write_table(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.4f")
    return path
