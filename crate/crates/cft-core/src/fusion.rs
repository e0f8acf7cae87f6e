//! Fusion data: the su(2)_k quantum Clebsch-Gordan condition, the modular
//! S-matrix with the Verlinde dimension formula, and the minimal-model
//! fusion rules generated by Phi_{1,2} and Phi_{2,1}.

use crate::error::{CftError, Result};
use crate::virasoro::check_minimal;

fn check_weight(lambda: u32, k: u32) -> Result<()> {
    if lambda > k {
        return Err(CftError::InvalidLabel(format!(
            "su(2)_{k} weight must satisfy 0 <= lambda <= {k}, got {lambda}"
        )));
    }
    Ok(())
}

/// Quantum Clebsch-Gordan condition for su(2)_k: the conformal-block
/// space of three integrable weights is one-dimensional iff the total
/// weight is even, the triangle inequality holds, and l1+l2+l3 <= 2k.
pub fn su2_fusion_admissible(l1: u32, l2: u32, l3: u32, k: u32) -> Result<bool> {
    check_weight(l1, k)?;
    check_weight(l2, k)?;
    check_weight(l3, k)?;
    let total = l1 + l2 + l3;
    let triangle = l1.abs_diff(l2) <= l3 && l3 <= l1 + l2;
    Ok(total % 2 == 0 && triangle && total <= 2 * k)
}

/// Modular S-matrix of su(2)_k,
/// S_{lambda mu} = sqrt(2/(k+2)) sin(pi (lambda+1)(mu+1) / (k+2)).
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    pub k: u32,
    pub entries: Vec<Vec<f64>>,
}

pub fn su2_s_matrix(k: u32) -> SMatrix {
    let n = (k + 2) as f64;
    let dim = (k + 1) as usize;
    let entries = (0..dim)
        .map(|l| {
            (0..dim)
                .map(|m| {
                    (2.0 / n).sqrt()
                        * (std::f64::consts::PI * ((l + 1) * (m + 1)) as f64 / n).sin()
                })
                .collect()
        })
        .collect();
    SMatrix { k, entries }
}

/// Verlinde dimension of the space of genus-g conformal blocks with the
/// given boundary weights: sum_lambda (S_{0 lambda})^{2-2g-n}
/// prod_i S_{lambda_i lambda}. The raw double-precision value is reported
/// together with the nearest integer and the rounding residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerlindeDimension {
    pub raw: f64,
    pub rounded: i64,
    pub residual: f64,
}

pub fn verlinde_dim(k: u32, genus: u32, weights: &[u32]) -> Result<VerlindeDimension> {
    for &w in weights {
        check_weight(w, k)?;
    }
    let s = su2_s_matrix(k);
    let exponent = 2 - 2 * genus as i32 - weights.len() as i32;
    let mut raw = 0.0f64;
    for lambda in 0..=(k as usize) {
        let mut term = s.entries[0][lambda].powi(exponent);
        for &w in weights {
            term *= s.entries[w as usize][lambda];
        }
        raw += term;
    }
    let rounded = raw.round();
    Ok(VerlindeDimension {
        raw,
        rounded: rounded as i64,
        residual: (raw - rounded).abs(),
    })
}

/// Fusion of one of the generating primaries into an arbitrary Kac-table
/// entry of M(P, Q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionGenerator {
    Phi11,
    Phi12,
    Phi21,
}

fn check_table_entry(p_mod: u32, q_mod: u32, p: u32, q: u32) -> Result<()> {
    if p == 0 || p >= p_mod || q == 0 || q >= q_mod {
        return Err(CftError::InvalidLabel(format!(
            "(p, q) = ({p}, {q}) is outside the Kac table of M({p_mod}, {q_mod})"
        )));
    }
    Ok(())
}

fn canonical_label(p_mod: u32, q_mod: u32, p: u32, q: u32) -> (u32, u32) {
    let mirror = (p_mod - p, q_mod - q);
    (p, q).min(mirror)
}

/// [Phi_{1,2}] x [Phi_{p,q}] = [Phi_{p,q-1}] + [Phi_{p,q+1}] and
/// [Phi_{2,1}] x [Phi_{p,q}] = [Phi_{p-1,q}] + [Phi_{p+1,q}], with labels
/// falling off the Kac table dropped and the survivors folded to
/// canonical representatives under (p,q) ~ (P-p, Q-q).
pub fn minimal_fuse(
    generator: FusionGenerator,
    p: u32,
    q: u32,
    p_mod: u32,
    q_mod: u32,
) -> Result<Vec<(u32, u32)>> {
    check_minimal(p_mod, q_mod)?;
    check_table_entry(p_mod, q_mod, p, q)?;
    let candidates: Vec<(u32, u32)> = match generator {
        FusionGenerator::Phi11 => vec![(p, q)],
        FusionGenerator::Phi12 => vec![(p, q.wrapping_sub(1)), (p, q + 1)],
        FusionGenerator::Phi21 => vec![(p.wrapping_sub(1), q), (p + 1, q)],
    };
    let mut labels: Vec<(u32, u32)> = candidates
        .into_iter()
        .filter(|&(a, b)| a >= 1 && a < p_mod && b >= 1 && b < q_mod)
        .map(|(a, b)| canonical_label(p_mod, q_mod, a, b))
        .collect();
    labels.sort_unstable();
    labels.dedup();
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_clebsch_gordan_examples() {
        assert!(su2_fusion_admissible(0, 0, 0, 1).unwrap());
        assert!(!su2_fusion_admissible(1, 1, 1, 1).unwrap(), "odd total");
        assert!(su2_fusion_admissible(1, 1, 2, 2).unwrap());
        // Admissible classically but cut by the level: total weight 6
        // exceeds 2k at k=2 and saturates it at k=3.
        assert!(!su2_fusion_admissible(2, 2, 2, 2).unwrap());
        assert!(su2_fusion_admissible(2, 2, 2, 3).unwrap());
        assert!(su2_fusion_admissible(3, 2, 9, 8).is_err(), "out of range");
    }

    #[test]
    fn admissibility_is_totally_symmetric() {
        for k in 1..=6u32 {
            for l1 in 0..=k {
                for l2 in 0..=k {
                    for l3 in 0..=k {
                        let base = su2_fusion_admissible(l1, l2, l3, k).unwrap();
                        for (a, b, c) in
                            [(l1, l3, l2), (l2, l1, l3), (l2, l3, l1), (l3, l1, l2), (l3, l2, l1)]
                        {
                            assert_eq!(su2_fusion_admissible(a, b, c, k).unwrap(), base);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_matrix_is_symmetric_and_orthogonal() {
        for k in 1..=8u32 {
            let s = su2_s_matrix(k);
            let dim = (k + 1) as usize;
            for i in 0..dim {
                for j in 0..dim {
                    assert!((s.entries[i][j] - s.entries[j][i]).abs() < 1e-15);
                    let dot: f64 = (0..dim)
                        .map(|l| s.entries[i][l] * s.entries[j][l])
                        .sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-9, "k={k} ({i},{j}): {dot}");
                }
            }
        }
    }

    #[test]
    fn three_point_verlinde_reproduces_admissibility() {
        for k in 1..=6u32 {
            for l1 in 0..=k {
                for l2 in 0..=k {
                    for l3 in 0..=k {
                        let dim = verlinde_dim(k, 0, &[l1, l2, l3]).unwrap();
                        let expected =
                            if su2_fusion_admissible(l1, l2, l3, k).unwrap() { 1 } else { 0 };
                        assert!(dim.residual < 1e-9);
                        assert_eq!(dim.rounded, expected, "k={k} ({l1},{l2},{l3})");
                    }
                }
            }
        }
    }

    #[test]
    fn torus_block_count_is_the_number_of_integrable_weights() {
        for k in 1..=4u32 {
            let dim = verlinde_dim(k, 1, &[]).unwrap();
            assert!(dim.residual < 1e-6);
            assert_eq!(dim.rounded, (k + 1) as i64);
        }
    }

    #[test]
    fn higher_genus_dimensions_are_positive_integers() {
        for k in 1..=4u32 {
            for genus in 0..=3u32 {
                for weights in [vec![], vec![0], vec![1, 1], vec![k, 1, 1], vec![2, 0, 2, 2]] {
                    if weights.iter().any(|&w| w > k) {
                        continue;
                    }
                    let dim = verlinde_dim(k, genus, &weights).unwrap();
                    assert!(
                        dim.residual < 1e-6,
                        "k={k} g={genus} {weights:?}: raw {}",
                        dim.raw
                    );
                    assert!(dim.rounded >= 0);
                }
            }
        }
    }

    #[test]
    fn ising_fusion_from_the_generators() {
        // In M(3,4): (1,1) is the identity, (1,2) the spin field sigma,
        // (1,3) ~ (2,1) the energy field epsilon.
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi12, 1, 2, 3, 4).unwrap(),
            vec![(1, 1), (1, 3)]
        );
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi21, 2, 1, 3, 4).unwrap(),
            vec![(1, 1)]
        );
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi12, 1, 1, 3, 4).unwrap(),
            vec![(1, 2)]
        );
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi11, 1, 3, 3, 4).unwrap(),
            vec![(1, 3)]
        );
    }

    #[test]
    fn fusion_by_sigma_in_ising_mixes_the_sectors() {
        // sigma x epsilon: Phi_{1,2} applied to (1,3) gives (1,2) after the
        // out-of-table label (1,4) is dropped.
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi12, 1, 3, 3, 4).unwrap(),
            vec![(1, 2)]
        );
    }

    #[test]
    fn lee_yang_fusion_closes_on_two_labels() {
        // M(2,5) has classes (1,1) and (1,2); Phi_{1,2} x Phi_{1,2} folds
        // (1,3) back to (1,2).
        assert_eq!(
            minimal_fuse(FusionGenerator::Phi12, 1, 2, 2, 5).unwrap(),
            vec![(1, 1), (1, 2)]
        );
    }

    #[test]
    fn invalid_labels_are_rejected() {
        assert!(minimal_fuse(FusionGenerator::Phi12, 0, 1, 3, 4).is_err());
        assert!(minimal_fuse(FusionGenerator::Phi12, 1, 4, 3, 4).is_err());
        assert!(minimal_fuse(FusionGenerator::Phi12, 1, 1, 4, 6).is_err());
        assert!(verlinde_dim(2, 0, &[3]).is_err());
    }
}
