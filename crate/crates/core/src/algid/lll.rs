use rug::{Integer, Rational};

/// Exact integral LLL reduction (de Weger's formulation, as in Cohen,
/// Algorithm 2.6.7) with Lovász constant `δ = num/den`.
///
/// Rows of `basis` must be linearly independent. All Gram–Schmidt data is
/// kept as integers: `d[i]` are the leading Gram determinants and
/// `lambda[k][j] = d[j+1] μ_{k,j}`, so every division below is exact.
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta: &Rational) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let num = delta.numer().clone();
    let den = delta.denom().clone();
    // 1-based Gram determinants with d[0] = 1.
    let mut d = vec![Integer::from(1); n + 1];
    let mut lambda = vec![vec![Integer::new(); n]; n];
    d[1] = dot(&basis[0], &basis[0]);
    let mut k = 1usize;
    let mut k_max = 0usize;

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lambda[k][i] * &lambda[j][i])) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    debug_assert!(u != 0, "basis rows are dependent");
                    d[k + 1] = u;
                }
            }
        }
        reduce(basis, &mut lambda, &d, k, k - 1);
        // Lovász: den·d_k·d_{k−2} < num·d_{k−1}² − den·λ²  ⇒ swap
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * &den;
        let lam2 = Integer::from(lambda[k][k - 1].square_ref());
        let rhs = Integer::from(d[k].square_ref()) * &num - lam2 * &den;
        if lhs < rhs {
            swap(basis, &mut lambda, &mut d, k, k_max);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for (x, y) in a.iter().zip(b) {
        s += Integer::from(x * y);
    }
    s
}

fn reduce(basis: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize) {
    let twice = Integer::from(lambda[k][l].abs_ref()) * 2u32;
    if twice <= d[l + 1] {
        return;
    }
    // nearest integer to λ/d
    let q = Rational::from((lambda[k][l].clone(), d[l + 1].clone())).round();
    let q = q.numer().clone();
    let (head, tail) = basis.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= Integer::from(&q * y);
    }
    let qd = Integer::from(&q * &d[l + 1]);
    lambda[k][l] -= qd;
    for i in 0..l {
        let t = Integer::from(&q * &lambda[l][i]);
        lambda[k][i] -= t;
    }
}

fn swap(basis: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &mut [Integer], k: usize, k_max: usize) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lambda[k][j]);
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], t);
    }
    let lam = lambda[k][k - 1].clone();
    let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(lam.square_ref())) / &d[k];
    for i in k + 1..=k_max {
        let t = lambda[i][k].clone();
        lambda[i][k] = (Integer::from(&d[k + 1] * &lambda[i][k - 1]) - Integer::from(&lam * &t)) / &d[k];
        lambda[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&lam * &lambda[i][k])) / &d[k + 1];
    }
    d[k] = b;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Integer>> {
        v.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    fn gram_det(b: &[Vec<Integer>]) -> Rational {
        // determinant of the Gram matrix by fraction-free elimination
        let n = b.len();
        let mut g: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| Rational::from(dot(&b[i], &b[j]))).collect())
            .collect();
        let mut det = Rational::from(1);
        for c in 0..n {
            let pivot = g[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                let f = Rational::from(&g[r][c] / &pivot);
                for j in c..n {
                    let t = Rational::from(&f * &g[c][j]);
                    g[r][j] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn classic_example() {
        // Cohen's example; the reduced basis has short first vector
        let mut b = rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let before = gram_det(&b);
        lll_reduce(&mut b, &Rational::from((3, 4)));
        assert_eq!(gram_det(&b), before);
        let first = dot(&b[0], &b[0]);
        assert!(first <= 3);
    }

    #[test]
    fn finds_small_relation() {
        // x = √2 to 60 bits: relation x² − 2 = 0 in [I | round(2^60 x^i)]
        let x = rug::Float::with_val(200, 2).sqrt();
        let scale = rug::Float::with_val(200, 1) << 60;
        let mut b = Vec::new();
        for i in 0..3u32 {
            let mut row = vec![Integer::new(); 4];
            row[i as usize] = Integer::from(1);
            let v: rug::Float = Pow::<u32>::pow(x.clone(), i) * &scale;
            row[3] = v.round().to_integer().unwrap();
            b.push(row);
        }
        lll_reduce(&mut b, &Rational::from((99, 100)));
        let r = &b[0];
        let c: Vec<i64> = r[..3].iter().map(|v| v.to_i64().unwrap()).collect();
        assert!(c == vec![-2, 0, 1] || c == vec![2, 0, -1], "{c:?}");
    }
}
