from .rouge import RougeScore, NGramCounts, rouge_n, rouge_su4, rouge_all, mean_scores, METRICS
from .novelty import novel_ngram_ratio
from .baselines import (
    extractive_oracle,
    random_sentences,
    copy_from_train,
    random_baseline,
    ExtractiveOracleSummarizer,
    RandomSummarizer,
)
from .report import (
    DocumentScores,
    score_document,
    scores_frame,
    corpus_means,
    evaluate_system,
    score_summaries,
    build_report,
    write_report,
    write_table,
)

__all__ = [
    'RougeScore',
    'NGramCounts',
    'rouge_n',
    'rouge_su4',
    'rouge_all',
    'mean_scores',
    'METRICS',
    'novel_ngram_ratio',
    'extractive_oracle',
    'random_sentences',
    'copy_from_train',
    'random_baseline',
    'ExtractiveOracleSummarizer',
    'RandomSummarizer',
    'DocumentScores',
    'score_document',
    'scores_frame',
    'corpus_means',
    'evaluate_system',
    'score_summaries',
    'build_report',
    'write_report',
    'write_table'
]
