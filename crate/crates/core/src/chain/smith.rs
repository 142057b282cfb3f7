//! Smith normal form over the integers and the linear algebra built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;

/// A unimodular change of basis together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub forward: Matrix,
    pub inverse: Matrix,
}

/// `U · A · V = D` with `D` diagonal, entries `d_1 | d_2 | … | d_r`, all positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// `U` and `U⁻¹`, when requested.
    pub left: Option<Transform>,
    /// `V` and `V⁻¹`, when requested.
    pub right: Option<Transform>,
}

/// Which transforms to accumulate while reducing.
#[derive(Clone, Copy, Debug, Default)]
pub struct SmithOptions {
    pub left: bool,
    pub right: bool,
}

impl SmithOptions {
    pub const FACTORS: SmithOptions = SmithOptions { left: false, right: false };
    pub const LEFT: SmithOptions = SmithOptions { left: true, right: false };
    pub const RIGHT: SmithOptions = SmithOptions { left: false, right: true };
    pub const BOTH: SmithOptions = SmithOptions { left: true, right: true };
}

struct Reducer {
    a: Matrix,
    u: Option<(Matrix, Matrix)>,
    v: Option<(Matrix, Matrix)>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap_rows(i, j);
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some((v, vi)) = &mut self.v {
            v.swap_cols(i, j);
            vi.swap_rows(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some((u, ui)) = &mut self.u {
            u.negate_row(i);
            ui.negate_col(i);
        }
    }

    /// `row[dst] += q · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        if let Some((u, ui)) = &mut self.u {
            u.add_row_multiple(dst, src, q);
            ui.add_col_multiple(src, dst, &-q);
        }
    }

    /// `col[dst] += q · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        if let Some((v, vi)) = &mut self.v {
            v.add_col_multiple(dst, src, q);
            vi.add_row_multiple(src, dst, &-q);
        }
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = self.a.shape();
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..m {
            for j in t..n {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                let better = best.as_ref().is_none_or(|(_, _, b)| ax < *b);
                if better {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` below/right of the pivot. Returns `false`
    /// if a nonzero remainder survived.
    fn clear_cross(&mut self, t: usize) -> bool {
        let (m, n) = self.a.shape();
        let mut clean = true;
        for i in t + 1..m {
            if self.a.get(i, t).is_zero() {
                continue;
            }
            let q = self.a.get(i, t).div_floor(self.a.get(t, t));
            self.add_row(i, t, &-q);
            if !self.a.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..n {
            if self.a.get(t, j).is_zero() {
                continue;
            }
            let q = self.a.get(t, j).div_floor(self.a.get(t, t));
            self.add_col(j, t, &-q);
            if !self.a.get(t, j).is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let (m, n) = self.a.shape();
        let p = self.a.get(t, t);
        if p.is_one() {
            return None;
        }
        (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a.get(i, j).is_multiple_of(p)))
    }

    fn run(mut self) -> SmithForm {
        let (m, n) = self.a.shape();
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.min_nonzero(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                if !self.clear_cross(t) {
                    let (pi, pj) = self.min_nonzero(t).expect("nonzero remainder exists");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                match self.non_divisible_row(t) {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        let invariant_factors: Vec<BigInt> = (0..t).map(|i| self.a.get(i, i).clone()).collect();
        SmithForm {
            rank: invariant_factors.len(),
            invariant_factors,
            left: self.u.map(|(forward, inverse)| Transform { forward, inverse }),
            right: self.v.map(|(forward, inverse)| Transform { forward, inverse }),
        }
    }
}

impl SmithForm {
    pub fn compute(a: &Matrix, opts: SmithOptions) -> SmithForm {
        let (m, n) = a.shape();
        Reducer {
            a: a.clone(),
            u: opts.left.then(|| (Matrix::identity(m), Matrix::identity(m))),
            v: opts.right.then(|| (Matrix::identity(n), Matrix::identity(n))),
        }
        .run()
    }

    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn left(&self) -> &Transform {
        self.left.as_ref().expect("left transform was not requested")
    }

    pub fn right(&self) -> &Transform {
        self.right.as_ref().expect("right transform was not requested")
    }
}

pub fn rank(a: &Matrix) -> usize {
    SmithForm::compute(a, SmithOptions::FACTORS).rank
}

/// A saturated basis of `ker a` with a retraction onto coordinates.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// `n × k`, columns form a basis.
    pub basis: Matrix,
    /// `k × n`, `coords · basis = I`.
    pub coords: Matrix,
}

pub fn kernel(a: &Matrix) -> Kernel {
    let n = a.cols();
    let s = SmithForm::compute(a, SmithOptions::RIGHT);
    let v = s.right();
    let free: Vec<usize> = (s.rank..n).collect();
    Kernel { basis: v.forward.select_cols(&free), coords: v.inverse.select_rows(&free) }
}

/// Kernel basis in column Hermite normal form, canonical for the lattice.
pub fn kernel_canonical(a: &Matrix) -> Kernel {
    let k = kernel(a);
    let basis = hermite_columns(&k.basis);
    let t = &k.coords * &basis;
    let t_inv = inverse(&t).expect("Hermite basis spans the same lattice");
    Kernel { coords: &t_inv * &k.coords, basis }
}

/// Canonical basis of the lattice spanned by the (independent) columns of `b`:
/// the transpose of the row Hermite normal form of `bᵀ`.
pub fn hermite_columns(b: &Matrix) -> Matrix {
    let mut r = b.transpose();
    let (k, n) = r.shape();
    let mut p = 0;
    for col in 0..n {
        if p == k {
            break;
        }
        loop {
            let best = (p..k)
                .filter(|&i| !r.get(i, col).is_zero())
                .min_by(|&i, &j| r.get(i, col).abs().cmp(&r.get(j, col).abs()));
            let Some(best) = best else { break };
            r.swap_rows(p, best);
            let mut clean = true;
            for i in p + 1..k {
                if r.get(i, col).is_zero() {
                    continue;
                }
                let q = r.get(i, col).div_floor(r.get(p, col));
                r.add_row_multiple(i, p, &-q);
                if !r.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r.get(p, col).is_zero() {
            continue;
        }
        if r.get(p, col).is_negative() {
            r.negate_row(p);
        }
        for i in 0..p {
            let q = r.get(i, col).div_floor(r.get(p, col));
            r.add_row_multiple(i, p, &-q);
        }
        p += 1;
    }
    r.transpose()
}

/// `ℤ^m / im a`, split into a free part with explicit projection and
/// representatives, plus the torsion invariants.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub torsion: Vec<BigInt>,
    /// `f × m`, the projection onto the free part.
    pub proj: Matrix,
    /// `m × f`, representatives with `proj · section = I`.
    pub section: Matrix,
}

impl Cokernel {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn cokernel(a: &Matrix) -> Cokernel {
    if let Some(c) = coordinate_cokernel(a) {
        return c;
    }
    let m = a.rows();
    let s = SmithForm::compute(a, SmithOptions::LEFT);
    let u = s.left();
    let free: Vec<usize> = (s.rank..m).collect();
    Cokernel {
        torsion: s.torsion(),
        proj: u.forward.select_rows(&free),
        section: u.inverse.select_cols(&free),
    }
}

/// Shortcut when every nonzero column of `a` is a signed unit vector.
fn coordinate_cokernel(a: &Matrix) -> Option<Cokernel> {
    let (m, n) = a.shape();
    let mut hit = vec![false; m];
    for j in 0..n {
        let mut seen = None;
        for i in 0..m {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if seen.is_some() || !x.abs().is_one() {
                return None;
            }
            seen = Some(i);
        }
        if let Some(i) = seen {
            hit[i] = true;
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| !hit[i]).collect();
    let id = Matrix::identity(m);
    Some(Cokernel { torsion: Vec::new(), proj: id.select_rows(&keep), section: id.select_cols(&keep) })
}

/// Some integer solution of `a · x = y`, if one exists.
pub fn solve(a: &Matrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = SmithForm::compute(a, SmithOptions::BOTH);
    let uy = s.left().forward.mul_vec(y);
    let n = a.cols();
    let mut z = vec![BigInt::zero(); n];
    for (i, yi) in uy.iter().enumerate() {
        if i < s.rank {
            let (q, r) = yi.div_rem(&s.invariant_factors[i]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(s.right().forward.mul_vec(&z))
}

/// Inverse of a unimodular matrix, `None` otherwise.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let s = SmithForm::compute(a, SmithOptions::BOTH);
    if s.rank != a.rows() || s.invariant_factors.iter().any(|d| !d.is_one()) {
        return None;
    }
    Some(&s.right().forward * &s.left().forward)
}

/// True iff `a` is injective with free cokernel (a split monomorphism).
pub fn is_split_injective(a: &Matrix) -> bool {
    let s = SmithForm::compute(a, SmithOptions::FACTORS);
    s.rank == a.cols() && s.invariant_factors.iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(a: &Matrix) -> (SmithForm, Matrix) {
        let s = SmithForm::compute(a, SmithOptions::BOTH);
        let d = &(&s.left().forward * a) * &s.right().forward;
        (s, d)
    }

    #[test]
    fn known_invariants() {
        let a = Matrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let (s, d) = diag_of(&a);
        assert_eq!(s.invariant_factors, vec![2.into(), 6.into(), 12.into()]);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn transforms_are_inverse() {
        let a = Matrix::from_i64(2, 4, &[3, 5, 7, 1, 4, 0, 2, 8]);
        let s = SmithForm::compute(&a, SmithOptions::BOTH);
        assert!((&s.left().forward * &s.left().inverse).is_identity());
        assert!((&s.right().forward * &s.right().inverse).is_identity());
    }

    #[test]
    fn kernel_and_cokernel() {
        let a = Matrix::from_i64(1, 2, &[2, 4]);
        let k = kernel(&a);
        assert_eq!(k.basis.cols(), 1);
        assert!((&a * &k.basis).is_zero());
        assert!((&k.coords * &k.basis).is_identity());
        let c = cokernel(&a);
        assert_eq!(c.torsion, vec![BigInt::from(2)]);
        assert_eq!(c.proj.rows(), 0);
    }

    #[test]
    fn hermite_is_canonical() {
        let b = Matrix::from_i64(3, 2, &[0, 0, -1, 1, 0, 1]);
        let h = hermite_columns(&b);
        assert_eq!(h, Matrix::from_i64(3, 2, &[0, 0, 1, 0, 0, 1]));
        let a = Matrix::from_i64(1, 3, &[1, 0, 0]);
        let k = kernel_canonical(&a);
        assert_eq!(k.basis, Matrix::from_i64(3, 2, &[0, 0, 1, 0, 0, 1]));
        assert!((&k.coords * &k.basis).is_identity());
    }

    #[test]
    fn solving() {
        let a = Matrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(solve(&a, &[4.into(), 9.into()]), Some(vec![2.into(), 3.into()]));
        assert_eq!(solve(&a, &[1.into(), 0.into()]), None);
        let u = Matrix::from_i64(2, 2, &[2, 1, 1, 1]);
        assert!((&inverse(&u).unwrap() * &u).is_identity());
        assert!(inverse(&a).is_none());
    }

    #[test]
    fn split_injectivity() {
        assert!(is_split_injective(&Matrix::from_i64(2, 1, &[1, 2])));
        assert!(!is_split_injective(&Matrix::from_i64(1, 1, &[2])));
        assert!(is_split_injective(&Matrix::zeros(3, 0)));
    }
}
