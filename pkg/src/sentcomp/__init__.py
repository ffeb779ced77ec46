"""Sentiment composition workbench for opposing-polarity phrases.

Submodules:
    lexicon     TSV lexicon/POS loading, candidate phrase extraction
    bws         best-worst scaling tuples, counting scores, agreement
    patterns    sentiment composition pattern mining
    embeddings  word vector files
    features    feature vector assembly and scaling
    baselines   deterministic rule predictors
    svm         RBF-kernel SVM/SVR trained with SMO
    evaluation  cross-validated evaluation and reports
    service     HTTP annotation backend
    cli         command-line front end
"""

__version__ = "0.1.0"
