from .schema import Turn, Meeting, Article, NONE_TAG, untagged_turn
from .tokenizer import tokenize, detokenize
from .vocab import (
    Vocab,
    TagVocab,
    RoleTable,
    build_vocab,
    build_tag_vocabs,
    build_role_table,
    RESERVED_TOKENS,
    PAD_ID,
    UNK_ID,
    BOS_ID,
    BEGIN_ID,
    END_ID,
)
from .corpus import (
    parse_meeting,
    serialize_meeting,
    canonicalize,
    parse_article,
    serialize_article,
    read_meetings,
    write_meetings,
    read_articles,
    write_articles,
    read_role_table,
    write_role_table,
)
from .pseudo_meeting import news_to_pseudo_meeting, group_articles, convert_articles
from .truncation import truncate_meeting
from .features import Featurizer, MeetingFeatures, TurnFeatures
from .synthetic import synthetic_meetings, synthetic_articles, MEETING_ROLES

__all__ = [
    'Turn',
    'Meeting',
    'Article',
    'NONE_TAG',
    'untagged_turn',
    'tokenize',
    'detokenize',
    'Vocab',
    'TagVocab',
    'RoleTable',
    'build_vocab',
    'build_tag_vocabs',
    'build_role_table',
    'RESERVED_TOKENS',
    'PAD_ID',
    'UNK_ID',
    'BOS_ID',
    'BEGIN_ID',
    'END_ID',
    'parse_meeting',
    'serialize_meeting',
    'canonicalize',
    'parse_article',
    'serialize_article',
    'read_meetings',
    'write_meetings',
    'read_articles',
    'write_articles',
    'read_role_table',
    'write_role_table',
    'news_to_pseudo_meeting',
    'group_articles',
    'convert_articles',
    'truncate_meeting',
    'Featurizer',
    'MeetingFeatures',
    'TurnFeatures',
    'synthetic_meetings',
    'synthetic_articles',
    'MEETING_ROLES'
]
