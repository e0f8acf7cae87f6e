//! Partition enumeration shared by the Verma and Fock bases.

/// All partitions of `n` into positive parts, each partition sorted in
/// descending order, listed in descending lexicographic order:
/// `[n], [n-1, 1], ..., [1, 1, ..., 1]`.
///
/// This ordering is the basis convention used everywhere in the crate, so
/// that e.g. the level-3 descendant basis reads L(-3), L(-2)L(-1), L(-1)^3.
pub fn enumerate(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    rec(n, n, &mut prefix, &mut out);
    out
}

fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    let top = max.min(n);
    for k in (1..=top).rev() {
        prefix.push(k);
        rec(n - k, k, prefix, out);
        prefix.pop();
    }
}
