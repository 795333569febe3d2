use super::{canonicalize, universal_diagrams, FinCat, FinStrictLcc};

pub const BUILTIN_NAMES: &[&str] = &["chain2", "chain3", "diamond", "semilattice1", "semilattice2", "semilattice3"];

fn fully_marked(c: FinCat) -> FinCat {
    let m = universal_diagrams(&c);
    c.with_markings(m)
}

/// The chain `0 < ... < 1` with `n` elements; inner elements are `a`, `b`, ...
pub fn chain(n: usize) -> FinCat {
    assert!(n >= 1);
    let names: Vec<String> = (0..n)
        .map(|i| match i {
            0 if n > 1 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => ((b'a' + (i - 1) as u8) as char).to_string(),
        })
        .collect();
    fully_marked(FinCat::poset(names, |a, b| a <= b, vec![]))
}

/// The four-element lattice `0 < a, b < 1`.
pub fn diamond() -> FinCat {
    let names = ["0", "a", "b", "1"].map(String::from).to_vec();
    fully_marked(FinCat::poset(names, |x, y| x == y || x == 0 || y == 3, vec![]))
}

/// The free meet-semilattice with top on `k` generators: subsets ordered by
/// reverse inclusion, with meet given by union.
pub fn semilattice(k: usize) -> FinCat {
    let n = 1usize << k;
    let names: Vec<String> = (0..n)
        .map(|s| {
            if s == 0 {
                "1".to_string()
            } else {
                (0..k).filter(|i| s & (1 << i) != 0).map(|i| format!("x{i}")).collect::<Vec<_>>().join("&")
            }
        })
        .collect();
    fully_marked(FinCat::poset(names, |s, t| s & t == t, vec![]))
}

pub fn builtin_model(name: &str) -> Option<FinStrictLcc> {
    let c = match name {
        "chain2" => chain(2),
        "chain3" => chain(3),
        "diamond" => diamond(),
        "semilattice1" => semilattice(1),
        "semilattice2" => semilattice(2),
        "semilattice3" => semilattice(3),
        _ => return None,
    };
    Some(canonicalize(&c).expect("built-in models are lcc").named(name))
}

/// The models used for soundness checks: 2-chain, 3-chain and diamond.
pub fn builtin_models() -> Vec<FinStrictLcc> {
    ["chain2", "chain3", "diamond"].iter().map(|n| builtin_model(n).expect("known model")).collect()
}
