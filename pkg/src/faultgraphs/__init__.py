"""Fault trees, binary decision trees and reduced ordered BDDs over one Boolean semantics."""
from faultgraphs.bdd import (
    BDD,
    BddRef,
    Op,
    OrderKind,
    bdd_min_cut_sets,
    bdd_probability,
    build_bdd,
    evaluate_bdd,
    from_fault_tree,
    order_heuristic,
)
from faultgraphs.boolean_core import (
    TruthTable,
    evaluate_table,
    minimal_cut_sets_bruteforce,
    minimize,
    probability_bruteforce,
)
from faultgraphs.converters import (
    ConversionReport,
    bdd_to_dt,
    bdd_to_ft,
    convert,
    cutsets_to_ft,
    dt_to_bdd,
    dt_to_ft,
    ft_to_bdd,
    ft_to_dt,
)
from faultgraphs.dataset import Dataset
from faultgraphs.decision_tree import (
    DecisionTree,
    dt_positive_rules,
    dt_truth_table,
    evaluate_dt,
    induce_dt,
)
from faultgraphs.fault_tree import (
    FaultTree,
    evaluate_ft,
    ft_probability_formulas,
    ft_truth_table,
    parse_ft,
    render_ft,
    sample_dataset,
)

__version__ = '0.1.0'
