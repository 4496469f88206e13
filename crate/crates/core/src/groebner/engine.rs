//! Buchberger's algorithm on submodules of a graded free module `A^r`.
//!
//! Ideals are the `r = 1` case. Module terms are compared position over
//! term: a smaller component index is larger, ties broken by the ring order.

use std::cmp::Ordering;

use crate::field::{Field, FieldElement};
use crate::polyring::{Monomial, PolyRing, Polynomial};

pub(crate) type MTerm = (usize, Monomial, FieldElement);

/// A free module `⊕ A(-twist_i)` as seen by the engine.
pub(crate) struct FreeSpace<'a> {
    pub ring: &'a PolyRing,
    pub twists: Vec<i64>,
}

impl<'a> FreeSpace<'a> {
    pub fn ideal(ring: &'a PolyRing) -> Self {
        FreeSpace { ring, twists: vec![0] }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        b.0.cmp(&a.0).then_with(|| self.ring.cmp(a.1, b.1))
    }

    pub fn degree(&self, comp: usize, m: &Monomial) -> i64 {
        self.twists[comp] + self.ring.degree_of(m) as i64
    }

    pub fn sort(&self, v: &mut [MTerm]) {
        v.sort_by(|a, b| self.cmp((b.0, &b.1), (a.0, &a.1)));
    }

    /// `a - c * m * g` for sorted term lists.
    pub fn sub_mul(&self, a: &[MTerm], c: FieldElement, m: &Monomial, g: &[MTerm]) -> Vec<MTerm> {
        let field = self.field();
        let mut out = Vec::with_capacity(a.len() + g.len());
        let mut i = 0;
        let mut gi = g.iter().map(|(k, gm, gc)| (*k, gm.mul(m), field.neg(field.mul(c, *gc)))).peekable();
        while i < a.len() {
            let Some(b) = gi.peek() else { break };
            match self.cmp((a[i].0, &a[i].1), (b.0, &b.1)) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(gi.next().unwrap()),
                Ordering::Equal => {
                    let b = gi.next().unwrap();
                    let s = field.add(a[i].2, b.2);
                    if !s.is_zero() {
                        out.push((b.0, b.1, s));
                    }
                    i += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(gi);
        out
    }

    pub fn make_monic(&self, v: &mut [MTerm]) {
        if let Some(lc) = v.first().map(|t| t.2) {
            if lc != FieldElement::ONE {
                let field = self.field();
                let inv = field.inv(lc).expect("nonzero lead");
                for t in v.iter_mut() {
                    t.2 = field.mul(t.2, inv);
                }
            }
        }
    }

    /// Full reduction of `v` by monic `reducers`.
    pub fn reduce(&self, v: Vec<MTerm>, reducers: &[&[MTerm]]) -> Vec<MTerm> {
        let mut work = v;
        let mut pos = 0;
        while pos < work.len() {
            let (comp, mono, coef) = (work[pos].0, &work[pos].1, work[pos].2);
            let found = reducers.iter().find_map(|g| {
                let (gc, gm, _) = &g[0];
                if *gc == comp {
                    gm.quotient_of(mono).map(|q| (q, *g))
                } else {
                    None
                }
            });
            match found {
                Some((q, g)) => {
                    let tail = self.sub_mul(&work[pos..], coef, &q, g);
                    work.truncate(pos);
                    work.extend(tail);
                }
                None => pos += 1,
            }
        }
        work
    }
}

pub(crate) fn poly_to_terms(f: &Polynomial) -> Vec<MTerm> {
    f.terms().iter().map(|(m, c)| (0, m.clone(), *c)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbOptions {
    /// Select pairs by sugar degree first. Irrelevant for homogeneous input.
    pub sugar: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { sugar: true }
    }
}

struct Element {
    terms: Vec<MTerm>,
    sugar: i64,
    active: bool,
}

impl Element {
    fn comp(&self) -> usize {
        self.terms[0].0
    }

    fn lead(&self) -> &Monomial {
        &self.terms[0].1
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: i64,
}

/// The reduced Gröbner basis of the submodule generated by `gens`, monic and
/// sorted ascending by leading term.
pub(crate) fn groebner(space: &FreeSpace, gens: Vec<Vec<MTerm>>, opts: GbOptions) -> Vec<Vec<MTerm>> {
    let mut gens: Vec<Vec<MTerm>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    for g in gens.iter_mut() {
        space.sort(g);
    }
    gens.sort_by(|a, b| space.cmp((a[0].0, &a[0].1), (b[0].0, &b[0].1)));

    let mut basis: Vec<Element> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let product_criterion = space.rank() == 1;

    let max_degree = |v: &[MTerm]| v.iter().map(|(k, m, _)| space.degree(*k, m)).max().unwrap_or(0);

    for g in gens {
        let sugar = max_degree(&g);
        let reducers: Vec<&[MTerm]> = basis.iter().filter(|e| e.active).map(|e| e.terms.as_slice()).collect();
        let mut h = space.reduce(g, &reducers);
        if h.is_empty() {
            continue;
        }
        space.make_monic(&mut h);
        insert(space, &mut basis, &mut pairs, Element { terms: h, sugar, active: true }, product_criterion);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                let by_sugar = if opts.sugar { pa.sugar.cmp(&pb.sugar) } else { Ordering::Equal };
                by_sugar
                    .then_with(|| {
                        let ka = basis[pa.i].comp();
                        let kb = basis[pb.i].comp();
                        space.cmp((ka, &pa.lcm), (kb, &pb.lcm))
                    })
                    .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        let qi = gi.lead().quotient_of(&pair.lcm).expect("lcm is a multiple");
        let qj = gj.lead().quotient_of(&pair.lcm).expect("lcm is a multiple");
        let scaled: Vec<MTerm> = gi.terms.iter().map(|(k, m, c)| (*k, m.mul(&qi), *c)).collect();
        let s = space.sub_mul(&scaled, FieldElement::ONE, &qj, &gj.terms);
        let reducers: Vec<&[MTerm]> = basis.iter().filter(|e| e.active).map(|e| e.terms.as_slice()).collect();
        let mut h = space.reduce(s, &reducers);
        if h.is_empty() {
            continue;
        }
        space.make_monic(&mut h);
        log::trace!("new basis element of degree {} ({} terms)", space.degree(h[0].0, &h[0].1), h.len());
        insert(space, &mut basis, &mut pairs, Element { terms: h, sugar: pair.sugar, active: true }, product_criterion);
    }

    // the active leads are minimal; reduce tails against each other
    let active: Vec<Vec<MTerm>> = basis.into_iter().filter(|e| e.active).map(|e| e.terms).collect();
    let mut out = Vec::with_capacity(active.len());
    for (idx, g) in active.iter().enumerate() {
        let others: Vec<&[MTerm]> =
            active.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, e)| e.as_slice()).collect();
        let head = g[0].clone();
        let mut tail = space.reduce(g[1..].to_vec(), &others);
        let mut v = vec![head];
        v.append(&mut tail);
        space.make_monic(&mut v);
        out.push(v);
    }
    out.sort_by(|a, b| space.cmp((a[0].0, &a[0].1), (b[0].0, &b[0].1)));
    out
}

/// Gebauer–Möller update for the new element `h`.
fn insert(space: &FreeSpace, basis: &mut Vec<Element>, pairs: &mut Vec<Pair>, h: Element, product_criterion: bool) {
    let hidx = basis.len();
    let hcomp = h.comp();
    let hlead = h.lead().clone();

    let degree_shift = |e: &Element, lcm: &Monomial| -> i64 {
        e.sugar + space.ring.degree_of(lcm) as i64 - space.ring.degree_of(e.lead()) as i64
    };

    // candidate new pairs
    let mut candidates: Vec<(usize, Monomial, bool)> = basis
        .iter()
        .enumerate()
        .filter(|(_, g)| g.active && g.comp() == hcomp)
        .map(|(i, g)| (i, g.lead().lcm(&hlead), product_criterion && g.lead().is_coprime(&hlead)))
        .collect();

    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    while let Some((i, lcm, coprime)) = candidates.pop() {
        let dominated = candidates.iter().chain(kept.iter()).any(|(_, other, _)| other.divides(&lcm));
        if coprime || !dominated {
            kept.push((i, lcm, coprime));
        }
    }

    // chain criterion on old pairs
    pairs.retain(|pr| {
        if basis[pr.i].comp() != hcomp || !hlead.divides(&pr.lcm) {
            return true;
        }
        let li = basis[pr.i].lead().lcm(&hlead);
        let lj = basis[pr.j].lead().lcm(&hlead);
        li == pr.lcm || lj == pr.lcm
    });

    for (i, lcm, coprime) in kept {
        if coprime {
            continue;
        }
        let sugar = degree_shift(&basis[i], &lcm).max(degree_shift(&h, &lcm));
        pairs.push(Pair { i, j: hidx, lcm, sugar });
    }

    for g in basis.iter_mut() {
        if g.active && g.comp() == hcomp && hlead.divides(g.lead()) {
            g.active = false;
        }
    }
    basis.push(h);
}
