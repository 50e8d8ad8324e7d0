//! Small dense linear algebra over exact rings and fields.

use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::AlgebraError;

pub type Matrix<C> = Vec<Vec<C>>;

/// Determinant by cofactor expansion; meant for n <= 4 over any ring.
pub fn det<C: Ring>(m: &Matrix<C>) -> C {
    let n = m.len();
    match n {
        0 => C::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = C::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let c = m[0][j].mul(&det(&minor(m, 0, j)));
                acc = if j % 2 == 0 { acc.add(&c) } else { acc.sub(&c) };
            }
            acc
        }
    }
}

fn minor<C: Ring>(m: &Matrix<C>, r: usize, c: usize) -> Matrix<C> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// `adj(M)` with `M * adj(M) = det(M) * I`.
pub fn adjugate<C: Ring>(m: &Matrix<C>) -> Matrix<C> {
    let n = m.len();
    let mut out = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = det(&minor(m, j, i));
            out[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    out
}

pub fn mat_vec<C: Ring>(m: &Matrix<C>, v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| {
            let mut acc = C::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc.add_assign(&a.mul(b));
                }
            }
            acc
        })
        .collect()
}

/// Solves `M r = v` over a field by Gaussian elimination.
pub fn solve<C: Ring>(m: &Matrix<C>, v: &[C]) -> Result<Vec<C>, AlgebraError> {
    let n = m.len();
    let mut a: Matrix<C> = m.iter().zip(v).map(|(row, b)| {
        let mut r = row.clone();
        r.push(b.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(AlgebraError::Singular)?;
        a.swap(col, piv);
        let inv = a[col][col].try_inv().ok_or(AlgebraError::Singular)?;
        for j in col..=n {
            a[col][j] = a[col][j].mul(&inv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n {
                    let d = f.mul(&a[col][j]);
                    a[r][j] = a[r][j].sub(&d);
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// 4x4 rational-function solve.
pub fn solve_linear_4(m: &[[RatFunc; 4]; 4], v: &[RatFunc; 4]) -> Result<[RatFunc; 4], AlgebraError> {
    let mm: Matrix<RatFunc> = m.iter().map(|r| r.to_vec()).collect();
    let r = solve(&mm, v)?;
    Ok([r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])
}

/// Basis of `{c : c M = 0}` over a field.
pub fn left_nullspace<C: Ring>(m: &Matrix<C>) -> Vec<Vec<C>> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    // Right nullspace of the transpose.
    let mut a: Matrix<C> = (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..rows {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].try_inv().expect("field element");
        for j in c..rows {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..rows {
                    let d = f.mul(&a[r][j]);
                    a[i][j] = a[i][j].sub(&d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..rows).filter(|c| !pivots.contains(c)) {
        let mut v = vec![C::zero(); rows];
        v[free] = C::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = a[k][free].neg();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_ratfunc;
    use crate::ring::int;

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn identity_and_singular() {
        let id: [[RatFunc; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|j| RatFunc::from_int((i == j) as i64)));
        let v = [r("x"), r("t/y"), r("1"), r("x+y")];
        assert_eq!(solve_linear_4(&id, &v).unwrap(), v);
        let ones: [[RatFunc; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| RatFunc::one()));
        assert_eq!(solve_linear_4(&ones, &v), Err(AlgebraError::Singular));
    }

    #[test]
    fn symbolic_solve_resubstitutes() {
        let m = vec![vec![r("1-t*x"), r("t*y")], vec![r("-t/x"), r("1 - t*y")]];
        let v = vec![r("t*x"), r("t*y")];
        let s = solve(&m, &v).unwrap();
        assert_eq!(mat_vec(&m, &s), v);
        let a = adjugate(&m);
        let d = det(&m);
        let s2: Vec<RatFunc> = mat_vec(&a, &v).iter().map(|e| e.div(&d).unwrap()).collect();
        assert_eq!(s, s2);
    }

    #[test]
    fn nullspace() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)], vec![int(0), int(1)]];
        let ns = left_nullspace(&m);
        assert_eq!(ns.len(), 1);
        let c = &ns[0];
        for j in 0..2 {
            let s: num_rational::BigRational = (0..3).map(|i| &c[i] * &m[i][j]).sum();
            assert_eq!(s, int(0));
        }
    }
}
