from ._mhv import (
    CoinBudgetExceeded,
    CompiledVerifier,
    MultiheadAutomaton,
    ParseError,
    Verifier,
    acceptance_probability,
    check_private_coin,
    compile_strong,
    compile_weak,
    dissimilarity,
    find_private_coin_certificate,
    nh_member,
    nh_verifier,
    parse_automaton,
    parse_compiled,
    parse_verifier,
    run_cli,
    split_chain,
    to_one_way_multihead,
    twin_member,
    twin_recognizer,
    twin_verifier,
)

__all__ = [name for name in dir() if not name.startswith("_")]
