//! The Moore complex and its inverse `Γ`.

use std::sync::Arc;

use super::{SimplicialError, SimplicialObject, TailBound};
use crate::chain::smith::kernel_canonical;
use crate::chain::{ChainComplex, ChainMap, Degree, Matrix};

/// Monotone surjections `[n] ↠ [k]` for all `k ≤ n`, ordered by `k` and then
/// lexicographically by their value sequences.
pub fn surjections(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=n {
        let mut cur = vec![0usize];
        grow(n, k, &mut cur, &mut out);
    }
    out
}

fn grow(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *cur.last().expect("nonempty");
    if cur.len() == n + 1 {
        if last == k {
            out.push(cur.clone());
        }
        return;
    }
    let remaining = n + 1 - cur.len();
    for next in [last, last + 1] {
        if next <= k && k - next <= remaining - 1 {
            cur.push(next);
            grow(n, k, cur, out);
            cur.pop();
        }
    }
}

/// Epi–mono factorization of a monotone map given by its values: returns the
/// surjection onto the image and the sorted image.
fn factor(values: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut image: Vec<usize> = values.to_vec();
    image.dedup();
    let epi = values.iter().map(|v| image.iter().position(|x| x == v).expect("in image")).collect();
    (epi, image)
}

fn level_rank(c: &ChainComplex, surj: &[Vec<usize>]) -> usize {
    surj.iter().map(|s| c.rank(*s.last().expect("nonempty") as Degree)).sum()
}

/// `Γ(C)` truncated at `N`: level `n` is `⊕_{[n]↠[k]} C_k` concentrated in
/// internal degree 0.
pub fn dold_kan_gamma(c: &ChainComplex, top: usize) -> Result<SimplicialObject, SimplicialError> {
    if let Some(lo) = c.min_degree() {
        if lo < 0 {
            return Err(SimplicialError::NegativeDegree { degree: lo });
        }
    }
    let surj: Vec<Vec<Vec<usize>>> = (0..=top + 1).map(surjections).collect();
    let levels: Vec<Arc<ChainComplex>> =
        (0..=top).map(|n| Arc::new(ChainComplex::concentrated(0, level_rank(c, &surj[n])))).collect();
    let offsets = |n: usize| -> Vec<usize> {
        let mut acc = 0;
        surj[n]
            .iter()
            .map(|s| {
                let o = acc;
                acc += c.rank(*s.last().expect("nonempty") as Degree);
                o
            })
            .collect()
    };
    // θ : [m] → [n] given by values; builds θ^* : Γ_n → Γ_m.
    let operator = |n: usize, m: usize, theta: &[usize]| -> ChainMap {
        let src_off = offsets(n);
        let dst_off = offsets(m);
        let mut mat = Matrix::zeros(levels[m].rank(0), levels[n].rank(0));
        for (si, sigma) in surj[n].iter().enumerate() {
            let k = *sigma.last().expect("nonempty");
            let composite: Vec<usize> = theta.iter().map(|&t| sigma[t]).collect();
            let (epi, image) = factor(&composite);
            let ti = surj[m].iter().position(|s| *s == epi).expect("surjection listed");
            let j = image.len() - 1;
            let block = if j == k {
                Matrix::identity(c.rank(k as Degree))
            } else if j + 1 == k && image[0] == 1 {
                c.diff(k as Degree).into_owned()
            } else {
                continue;
            };
            mat.add_block(dst_off[ti], src_off[si], &block);
        }
        let mut comp = Some(mat);
        ChainMap::from_fn(levels[n].clone(), levels[m].clone(), |_, _| comp.take())
    };
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    let theta: Vec<usize> = (0..n).map(|t| if t < i { t } else { t + 1 }).collect();
                    operator(n, n - 1, &theta)
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..top)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let theta: Vec<usize> = (0..=n + 1).map(|t| if t <= j { t } else { t - 1 }).collect();
                    operator(n, n + 1, &theta)
                })
                .collect()
        })
        .collect();
    let tail = match c.max_degree() {
        Some(hi) if hi > top as Degree => TailBound::MinInternalDegree(0),
        _ => TailBound::Vanishing,
    };
    Ok(SimplicialObject::new(levels, faces, degeneracies)?.with_tail(tail))
}

/// The Moore complex `N_n = ⋂_{i≥1} ker d_i` with differential `d_0`, for a
/// simplicial object whose levels sit in internal degree 0.
pub fn dold_kan_normalize(x: &SimplicialObject) -> Result<ChainComplex, SimplicialError> {
    for (n, l) in x.levels().iter().enumerate() {
        if l.degrees().any(|k| k != 0) {
            return Err(SimplicialError::NotDiscrete { level: n });
        }
    }
    let top = x.truncation();
    let kernels: Vec<_> = (0..=top)
        .map(|n| {
            let r = x.level(n).rank(0);
            let blocks: Vec<_> = (1..=n).map(|i| x.face(n, i).component(0).into_owned()).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            let stacked = Matrix::vstack(r, &refs);
            kernel_canonical(&stacked)
        })
        .collect();
    let ranks: Vec<usize> = kernels.iter().map(|k| k.basis.cols()).collect();
    let mut diffs = vec![Matrix::zeros(0, ranks[0])];
    for n in 1..=top {
        let d0 = x.face(n, 0).component(0);
        diffs.push(&(&kernels[n - 1].coords * &*d0) * &kernels[n].basis);
    }
    Ok(ChainComplex::new(0, ranks, diffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(0).len(), 1);
        assert_eq!(surjections(2).len(), 4);
        assert_eq!(surjections(3).iter().filter(|s| *s.last().unwrap() == 1).count(), 3);
    }

    #[test]
    fn gamma_of_z_is_constant() {
        let g = dold_kan_gamma(&ChainComplex::z(0), 3).unwrap();
        assert!(g.validate().is_ok());
        for n in 0..=3 {
            assert_eq!(g.level(n).rank(0), 1);
        }
    }

    #[test]
    fn gamma_of_z1_ranks() {
        let g = dold_kan_gamma(&ChainComplex::z(1), 4).unwrap();
        assert!(g.validate().is_ok());
        let ranks: Vec<usize> = (0..=4).map(|n| g.level(n).rank(0)).collect();
        assert_eq!(ranks, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn gamma_rejects_negative() {
        assert!(matches!(dold_kan_gamma(&ChainComplex::z(-1), 2), Err(SimplicialError::NegativeDegree { .. })));
    }

    #[test]
    fn round_trip_two_term() {
        let c = ChainComplex::two_term(1, Matrix::from_i64(2, 1, &[2, 3]));
        let g = dold_kan_gamma(&c, 2).unwrap();
        assert!(g.validate().is_ok());
        assert_eq!(dold_kan_normalize(&g).unwrap(), c);
    }
}
