"""Semantic segmentation of policies over a sentence relatedness graph."""
from .cliques import maximal_cliques
from .embeddings import EmbeddingTable, EmptyVocabularyError, train_embeddings
from .graphseg import Segment, segment, segment_sentences, sentence_relatedness

__all__ = [
    "EmbeddingTable",
    "EmptyVocabularyError",
    "Segment",
    "maximal_cliques",
    "segment",
    "segment_sentences",
    "sentence_relatedness",
    "train_embeddings",
]
