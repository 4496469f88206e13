use std::cmp::Ordering;

/// Exponent vector of a monomial `x_1^{a_1} ... x_n^{a_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn var(n: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[i] = power;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    /// Product; panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow in monomial product")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_add(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e.checked_mul(k).expect("exponent overflow in monomial power")).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Variables occurring with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }
}

/// Monomial orders supported by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Weighted degree, ties broken by reverse lexicographic order.
    #[default]
    Grevlex,
    Lex,
    /// Block order: weighted grevlex on the first `k` variables, then weighted
    /// grevlex on the rest. Eliminates the first `k` variables.
    Elimination(usize),
}

impl MonomialOrder {
    pub fn compare(&self, weights: &[u32], a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.0.len();
        match *self {
            MonomialOrder::Grevlex => grevlex_block(weights, &a.0, &b.0, 0, n),
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Elimination(k) => {
                let k = k.min(n);
                grevlex_block(weights, &a.0, &b.0, 0, k).then_with(|| grevlex_block(weights, &a.0, &b.0, k, n))
            }
        }
    }
}

fn grevlex_block(weights: &[u32], a: &[u32], b: &[u32], lo: usize, hi: usize) -> Ordering {
    let deg = |m: &[u32]| -> u64 { (lo..hi).map(|i| m[i] as u64 * weights[i] as u64).sum() };
    deg(a).cmp(&deg(b)).then_with(|| {
        for i in (lo..hi).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

/// All monomials in `n` variables of weighted degree exactly `degree`, in
/// lexicographic order of exponent vectors (descending).
pub fn monomials_of_degree(weights: &[u32], degree: u64) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == weights.len() {
            if left.is_multiple_of(weights[i] as u64) {
                let e = left / weights[i] as u64;
                if let Ok(e) = u32::try_from(e) {
                    cur[i] = e;
                    out.push(Monomial(cur.clone()));
                    cur[i] = 0;
                }
            }
            return;
        }
        let w = weights[i] as u64;
        for e in (0..=left / w).rev() {
            cur[i] = e as u32;
            rec(weights, i + 1, left - e * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if weights.is_empty() {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(weights, 0, degree, &mut vec![0; weights.len()], &mut out);
    out
}
