//! Exact noncommutative polynomial algebra driven by a bracket table.

mod expr;
mod generator;
mod parse;
mod table;

use std::collections::BTreeMap;

pub use expr::{Expression, Word};
pub use generator::{Generator, Index, Kind};
pub use parse::parse;
pub use table::{BracketTable, Mode};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

const MAX_REWRITES: usize = 5_000_000;

fn expand_definitions(e: &Expression, t: &BracketTable) -> Result<Expression> {
    let mut out = Expression::zero();
    for (w, c) in e.terms() {
        let mut acc = Expression::scalar(c.clone());
        for g in w {
            let factor = match t.definition(g) {
                Some(d) => d.clone(),
                None if t.contains(g) => Expression::gen(*g),
                None => return Err(Error::UnknownGenerator(g.to_string())),
            };
            acc = &acc * &factor;
        }
        out = out + acc;
    }
    Ok(out)
}

/// Canonical representative of `e`.
///
/// In commutator mode the first out-of-order adjacent pair `ab` is rewritten
/// to `ba + [a,b]` until every word is sorted. In Poisson mode words are
/// sorted directly.
pub fn normal_form(e: &Expression, t: &BracketTable) -> Result<Expression> {
    let e = expand_definitions(e, t)?;
    let mut out = Expression::zero();
    if t.mode() == Mode::Poisson {
        for (w, c) in e.into_terms() {
            let mut w = w;
            w.sort();
            out.add_term(w, c);
        }
        return Ok(out);
    }
    let mut pending: BTreeMap<Word, GaussianRational> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<Word, GaussianRational>, w: Word, c: GaussianRational| {
        use num_traits::Zero;
        let slot = pending.entry(w).or_insert_with(GaussianRational::zero);
        *slot += c;
    };
    for (w, c) in e.into_terms() {
        push(&mut pending, w, c);
    }
    let mut steps = 0usize;
    while let Some((w, c)) = pending.pop_last() {
        use num_traits::Zero;
        if c.is_zero() {
            continue;
        }
        let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) else {
            out.add_term(w, c);
            continue;
        };
        steps += 1;
        if steps > MAX_REWRITES {
            return Err(Error::NonTerminating(MAX_REWRITES));
        }
        let (a, b) = (w[k], w[k + 1]);
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        push(&mut pending, swapped, c.clone());
        if let Some(br) = t.get(&a, &b) {
            for (u, d) in br.terms() {
                let mut nw = Vec::with_capacity(w.len() - 2 + u.len());
                nw.extend_from_slice(&w[..k]);
                nw.extend_from_slice(u);
                nw.extend_from_slice(&w[k + 2..]);
                push(&mut pending, nw, &c * d);
            }
        }
    }
    Ok(out)
}

/// Bracket of two expressions by bilinearity and the Leibniz rule, in normal form.
pub fn bracket(a: &Expression, b: &Expression, t: &BracketTable) -> Result<Expression> {
    let a = normal_form(a, t)?;
    let b = normal_form(b, t)?;
    let mut raw = Expression::zero();
    for (u, cu) in a.terms() {
        for (v, cv) in b.terms() {
            let c = cu * cv;
            for (i, ui) in u.iter().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    let Some(br) = t.get(ui, vj) else { continue };
                    for (m, cm) in br.terms() {
                        let mut w = Vec::with_capacity(u.len() + v.len());
                        w.extend_from_slice(&u[..i]);
                        w.extend_from_slice(&v[..j]);
                        w.extend_from_slice(m);
                        w.extend_from_slice(&v[j + 1..]);
                        w.extend_from_slice(&u[i + 1..]);
                        raw.add_term(w, &c * cm);
                    }
                }
            }
        }
    }
    normal_form(&raw, t)
}

/// `[[a,b],c] + [[b,c],a] + [[c,a],b]` in normal form.
pub fn jacobi_residual(
    a: &Expression,
    b: &Expression,
    c: &Expression,
    t: &BracketTable,
) -> Result<Expression> {
    let r1 = bracket(&bracket(a, b, t)?, c, t)?;
    let r2 = bracket(&bracket(b, c, t)?, a, t)?;
    let r3 = bracket(&bracket(c, a, t)?, b, t)?;
    normal_form(&(r1 + r2 + r3), t)
}

/// Normal-ordered product.
pub fn product(a: &Expression, b: &Expression, t: &BracketTable) -> Result<Expression> {
    normal_form(&(a * b), t)
}
