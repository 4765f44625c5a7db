//! Buchberger's algorithm with the Gebauer–Möller pair criteria.

use std::cmp::Ordering;

use thiserror::Error;

use crate::poly::{reduce, Monomial, MonomialOrder, Poly};

/// Resource limits for a Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerLimits {
    /// Maximum number of S-pairs reduced before giving up.
    pub max_pairs: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_pairs: 50_000 }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("pair limit {limit} exceeded: {processed} pairs reduced, basis size {basis_len}, {pending} pairs pending")]
pub struct GroebnerError {
    pub limit: usize,
    pub processed: usize,
    pub basis_len: usize,
    pub pending: usize,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State {
    order: MonomialOrder,
    polys: Vec<Poly>,
    leads: Vec<Monomial>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl State {
    fn lcm(&self, a: usize, b: usize) -> Monomial {
        self.leads[a].lcm(&self.leads[b])
    }

    /// Gebauer–Möller update for a new basis element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.leads[h].clone();
        let candidates: Vec<(usize, Monomial)> =
            self.active.iter().map(|&g| (g, self.lcm(h, g))).collect();

        // Chain criterion among the new pairs.
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (k, (g, l)) in candidates.iter().enumerate() {
            let coprime = lh.is_coprime(&self.leads[*g]);
            let dominated = candidates[k + 1..].iter().any(|(_, l2)| l2.divides(l))
                || kept.iter().any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        // Drop pairs whose lcm equals another's: keep one representative.
        let mut unique: Vec<(usize, Monomial)> = Vec::new();
        for (g, l) in kept {
            if let Some(pos) = unique.iter().position(|(_, l2)| *l2 == l) {
                // prefer recording a coprime pair, which is then discarded
                if lh.is_coprime(&self.leads[g]) {
                    unique[pos] = (g, l);
                }
            } else {
                unique.push((g, l));
            }
        }
        let fresh: Vec<Pair> = unique
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(&self.leads[*g]))
            .map(|(g, lcm)| Pair { i: g, j: h, lcm })
            .collect();

        // Remove old pairs made redundant by h.
        let leads = &self.leads;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && leads[p.i].lcm(&lh) != p.lcm
                && leads[p.j].lcm(&lh) != p.lcm)
        });
        self.pairs.extend(fresh);

        let leads = &self.leads;
        self.active.retain(|&g| !lh.divides(&leads[g]));
        self.active.push(h);
    }

    fn push(&mut self, p: Poly) -> usize {
        let p = p.monic(self.order);
        let lead = p.leading_term(self.order).expect("nonzero").0.clone();
        self.polys.push(p);
        self.leads.push(lead);
        self.polys.len() - 1
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                order
                    .cmp(&pa.lcm, &pb.lcm)
                    .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, p: &Pair) -> Poly {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let one = crate::poly::Rational::from_integer(1.into());
        let a = f.mul_term(&one, &self.leads[p.i].quotient_of(&p.lcm));
        let b = g.mul_term(&one, &self.leads[p.j].quotient_of(&p.lcm));
        &a - &b
    }

    fn active_polys(&self) -> Vec<Poly> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// The result is monic, inter-reduced and sorted by leading monomial
/// (descending), so it is unique for a given ideal and order.  The zero
/// ideal yields an empty basis.
pub fn groebner_basis(
    gens: &[Poly],
    order: MonomialOrder,
    limits: GroebnerLimits,
) -> Result<Vec<Poly>, GroebnerError> {
    let mut st = State {
        order,
        polys: Vec::new(),
        leads: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens {
        let r = reduce(g, &st.active_polys(), order);
        if r.is_zero() {
            continue;
        }
        if r.as_constant().is_some() {
            return Ok(vec![Poly::one()]);
        }
        let h = st.push(r);
        st.update(h);
    }
    let mut processed = 0;
    while let Some(pair) = st.next_pair() {
        if processed >= limits.max_pairs {
            return Err(GroebnerError {
                limit: limits.max_pairs,
                processed,
                basis_len: st.active.len(),
                pending: st.pairs.len() + 1,
            });
        }
        processed += 1;
        let s = st.s_poly(&pair);
        let r = reduce(&s, &st.active_polys(), order);
        if r.is_zero() {
            continue;
        }
        if r.as_constant().is_some() {
            return Ok(vec![Poly::one()]);
        }
        let h = st.push(r);
        st.update(h);
    }
    Ok(interreduce(st.active_polys(), order))
}

/// Minimalizes and fully inter-reduces a Gröbner basis.
fn interreduce(mut basis: Vec<Poly>, order: MonomialOrder) -> Vec<Poly> {
    basis.sort_by(|a, b| lead_cmp(a, b, order));
    // minimal: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, p) in basis.iter().enumerate() {
        let lp = p.leading_term(order).unwrap().0;
        let divisible = basis.iter().enumerate().any(|(m, q)| {
            let lq = q.leading_term(order).unwrap().0;
            m != k && lq.divides(lp) && (lq != lp || m < k)
        });
        if !divisible {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, q)| q.clone())
            .collect();
        let lead = minimal[k].leading_term(order).map(|(m, c)| Poly::term(c.clone(), m.clone())).unwrap();
        let tail = &minimal[k] - &lead;
        let r = &lead + &reduce(&tail, &others, order);
        out.push(r.monic(order));
    }
    out.sort_by(|a, b| lead_cmp(b, a, order));
    out
}

fn lead_cmp(a: &Poly, b: &Poly, order: MonomialOrder) -> Ordering {
    let la = a.leading_term(order).unwrap().0;
    let lb = b.leading_term(order).unwrap().0;
    order.cmp(la, lb)
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Poly, g: &Poly, order: MonomialOrder) -> Poly {
    let (lf, cf) = f.leading_term(order).expect("nonzero");
    let (lg, cg) = g.leading_term(order).expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_term(&cf.recip(), &lf.quotient_of(&l));
    let b = g.mul_term(&cg.recip(), &lg.quotient_of(&l));
    &a - &b
}

/// Checks Buchberger's criterion directly: every S-polynomial of `basis`
/// reduces to zero.
pub fn is_groebner_basis(basis: &[Poly], order: MonomialOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order);
            if !reduce(&s, basis, order).is_zero() {
                return false;
            }
        }
    }
    true
}

/// True when no term of any element is divisible by another element's
/// leading monomial.
pub fn is_reduced_basis(basis: &[Poly], order: MonomialOrder) -> bool {
    basis.iter().enumerate().all(|(k, p)| {
        let others: Vec<Poly> = basis
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, q)| q.clone())
            .collect();
        crate::poly::reduce::is_reduced_wrt(p, &others, order)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    fn gb(gens: &[&str], order: MonomialOrder) -> Vec<Poly> {
        let g: Vec<Poly> = gens.iter().map(|s| poly(s)).collect();
        groebner_basis(&g, order, GroebnerLimits::default()).unwrap()
    }

    #[test]
    fn single_generator() {
        assert_eq!(gb(&["alpha"], MonomialOrder::Grevlex), vec![poly("alpha")]);
    }

    #[test]
    fn circle_meets_diagonal() {
        // x = alpha, y = beta
        let b = gb(&["alpha^2 + beta^2 - 1", "alpha - beta"], MonomialOrder::Lex);
        assert_eq!(b, vec![poly("alpha - beta"), poly("beta^2 - 1/2")]);
    }

    #[test]
    fn rabinowitsch_contradiction() {
        assert_eq!(gb(&["alpha", "1 - t1*alpha"], MonomialOrder::Grevlex), vec![Poly::one()]);
    }

    #[test]
    fn zero_ideal() {
        assert!(gb(&["0"], MonomialOrder::Grevlex).is_empty());
    }

    #[test]
    fn cyclic3_is_groebner_and_reduced() {
        let gens = [
            "alpha + beta + gamma",
            "alpha*beta + beta*gamma + gamma*alpha",
            "alpha*beta*gamma - 1",
        ];
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let b = gb(&gens, order);
            assert!(is_groebner_basis(&b, order));
            assert!(is_reduced_basis(&b, order));
            for g in gens {
                assert!(reduce(&poly(g), &b, order).is_zero());
            }
        }
    }

    #[test]
    fn pair_limit_reports_progress() {
        let g: Vec<Poly> = ["alpha^2*beta - gamma", "beta^2*gamma - alpha", "gamma^2*alpha - beta"]
            .iter()
            .map(|s| poly(s))
            .collect();
        let err = groebner_basis(&g, MonomialOrder::Lex, GroebnerLimits { max_pairs: 1 }).unwrap_err();
        assert_eq!(err.processed, 1);
        assert!(err.pending > 0);
    }
}
