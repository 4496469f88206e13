//! Component count of `Proj A/I` for square-free monomial ideals, read off
//! from the graph of minimal primes: two coordinate subspaces meet in
//! projective space exactly when their prime ideals together miss a variable.

use thiserror::Error;

use crate::groebner::{saturate_irrelevant, Ideal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("generator `{0}` is not a square-free monomial")]
    NotSquarefreeMonomial(String),
    #[error("the oracle handles at most 64 variables, got {0}")]
    TooManyVariables(usize),
}

/// Minimal primes of a square-free monomial ideal, each given as the sorted
/// list of variable indices generating it. The unit ideal has none.
pub fn minimal_primes_squarefree(ideal: &Ideal) -> Result<Vec<Vec<usize>>, OracleError> {
    if ideal.ring().nvars() > 64 {
        return Err(OracleError::TooManyVariables(ideal.ring().nvars()));
    }
    let mut supports: Vec<u64> = Vec::with_capacity(ideal.generators().len());
    for g in ideal.generators() {
        let [(m, _)] = g.terms() else {
            return Err(OracleError::NotSquarefreeMonomial(g.to_string()));
        };
        if m.exponents().iter().any(|&e| e > 1) {
            return Err(OracleError::NotSquarefreeMonomial(g.to_string()));
        }
        supports.push(m.support().fold(0u64, |acc, i| acc | (1 << i)));
    }

    // every prime must contain a variable from each generator; branch on the
    // first generator not yet covered
    fn covers(supports: &[u64], chosen: u64, out: &mut Vec<u64>) {
        if out.iter().any(|&p| p & !chosen == 0) {
            return;
        }
        match supports.iter().find(|&&s| s & chosen == 0) {
            None => out.push(chosen),
            Some(&s) => {
                for i in 0..64 {
                    if s & (1 << i) != 0 {
                        covers(supports, chosen | (1 << i), out);
                    }
                }
            }
        }
    }
    let mut found = Vec::new();
    covers(&supports, 0, &mut found);
    let mut minimal: Vec<u64> =
        found.iter().copied().filter(|&p| !found.iter().any(|&q| q != p && q & !p == 0)).collect();
    minimal.sort_by_key(|&p| bits(p));
    minimal.dedup();
    Ok(minimal.into_iter().map(bits).collect())
}

fn bits(set: u64) -> Vec<usize> {
    (0..64).filter(|i| set & (1 << i) != 0).collect()
}

/// Connected components of the graph on `primes` with an edge whenever the
/// union of two primes is not all `n` variables.
pub fn graph_component_count(primes: &[Vec<usize>], n: usize) -> usize {
    let mut parent: Vec<usize> = (0..primes.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..primes.len() {
        for j in i + 1..primes.len() {
            let mut union: Vec<usize> = primes[i].iter().chain(&primes[j]).copied().collect();
            union.sort_unstable();
            union.dedup();
            if union.len() < n {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..primes.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Geometric component count of `Proj A/I` for a square-free monomial ideal.
pub fn oracle_component_count(ideal: &Ideal) -> Result<usize, OracleError> {
    let n = ideal.ring().nvars();
    let saturated = saturate_irrelevant(ideal).groebner().to_ideal();
    let primes: Vec<Vec<usize>> =
        minimal_primes_squarefree(&saturated)?.into_iter().filter(|p| p.len() < n).collect();
    Ok(graph_component_count(&primes, n))
}
