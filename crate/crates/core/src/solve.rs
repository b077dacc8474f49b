//! Exact solutions of polynomial systems with finitely many solutions in
//! the working field.
//!
//! The solver alternates three moves: eliminate a variable that occurs
//! linearly with a constant coefficient in some equation, branch on the
//! roots of a univariate equation, and otherwise replace the system by its
//! lexicographic Gröbner basis. A branch left with undetermined unknowns is
//! reported as positive dimensional instead of being enumerated.

use crate::error::Result;
use crate::groebner::{buchberger_with_cap, MonomialOrder};
use crate::poly::{MultiPoly, RingRef};
use crate::roots::{resultant, roots_in_field};
use crate::scalar::GaussRational;

/// Outcome of [`solve_system`] and [`solve_staged`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solutions {
    /// Every isolated solution with all coordinates in the field.
    pub points: Vec<Vec<GaussRational>>,
    /// Positive-dimensional branches; unknowns that are fixed on the whole
    /// branch carry their value.
    pub families: Vec<Vec<Option<GaussRational>>>,
}

type Partial = Vec<Option<GaussRational>>;

#[derive(Default)]
struct Found {
    points: Vec<Partial>,
    families: Vec<Partial>,
}

#[derive(Clone)]
enum Binding {
    Value(GaussRational),
    Expr(MultiPoly),
}

/// Solves `eqs = 0` over the field of `ring`, whose variables are the
/// unknowns.
pub fn solve_system(ring: &RingRef, eqs: &[MultiPoly], degree_cap: u32) -> Result<Solutions> {
    let required = vec![true; ring.nvars()];
    let found = solve_masked(ring, eqs, &required, degree_cap)?;
    Ok(Solutions {
        points: found
            .points
            .into_iter()
            .map(|p| p.into_iter().map(|v| v.expect("required")).collect())
            .collect(),
        families: found.families,
    })
}

/// Solves equation groups in order: each group is solved on its own after
/// substituting the solutions of the previous ones. When a group has
/// infinitely many solutions, it and all later groups are solved together.
/// Suited to systems whose later groups become linear once earlier ones are
/// fixed.
pub fn solve_staged(ring: &RingRef, groups: &[Vec<MultiPoly>], degree_cap: u32) -> Result<Solutions> {
    let mut found = Found::default();
    staged_rec(ring, groups, vec![None; ring.nvars()], degree_cap, &mut found)?;
    Ok(Solutions {
        points: found
            .points
            .into_iter()
            .map(|p| p.into_iter().map(|v| v.expect("complete")).collect())
            .collect(),
        families: found.families,
    })
}

fn substitute_values(e: &MultiPoly, values: &[Option<GaussRational>]) -> MultiPoly {
    let mut out = e.clone();
    for v in e.occurring_vars() {
        if let Some(c) = &values[v] {
            out = out.substitute_at(v, &MultiPoly::constant(e.ring(), c.clone()));
        }
    }
    out
}

fn merge(values: &[Option<GaussRational>], partial: &[Option<GaussRational>]) -> Partial {
    values
        .iter()
        .zip(partial)
        .map(|(a, b)| a.clone().or_else(|| b.clone()))
        .collect()
}

fn staged_rec(
    ring: &RingRef,
    groups: &[Vec<MultiPoly>],
    values: Partial,
    cap: u32,
    out: &mut Found,
) -> Result<()> {
    let Some((first, rest)) = groups.split_first() else {
        if values.iter().all(Option::is_some) {
            out.points.push(values);
        } else {
            out.families.push(values);
        }
        return Ok(());
    };
    let eqs: Vec<MultiPoly> = first.iter().map(|e| substitute_values(e, &values)).collect();
    let mut required = vec![false; ring.nvars()];
    for e in &eqs {
        for v in e.occurring_vars() {
            required[v] = true;
        }
    }
    let stage = solve_masked(ring, &eqs, &required, cap)?;
    if stage.families.is_empty() {
        for p in stage.points {
            staged_rec(ring, rest, merge(&values, &p), cap, out)?;
        }
        return Ok(());
    }
    let all: Vec<MultiPoly> = groups
        .iter()
        .flatten()
        .map(|e| substitute_values(e, &values))
        .collect();
    let unbound: Vec<bool> = values.iter().map(Option::is_none).collect();
    let joint = solve_masked(ring, &all, &unbound, cap)?;
    for p in joint.points {
        out.points.push(merge(&values, &p));
    }
    for f in joint.families {
        out.families.push(merge(&values, &f));
    }
    Ok(())
}

/// Solutions restricted to the `required` unknowns; the rest are left
/// `None`.
fn solve_masked(ring: &RingRef, eqs: &[MultiPoly], required: &[bool], cap: u32) -> Result<Found> {
    let mut out = Found::default();
    let bindings = vec![None; ring.nvars()];
    solve_rec(ring, eqs.to_vec(), bindings, required, cap, &mut out)?;
    Ok(out)
}

fn normalize(eqs: Vec<MultiPoly>) -> Option<Vec<MultiPoly>> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for e in eqs {
        if e.is_zero() {
            continue;
        }
        if e.is_constant() {
            return None;
        }
        let e = e.monic();
        if !out.contains(&e) {
            out.push(e);
        }
    }
    Some(out)
}

/// An equation `a u + r` with `a` constant and `u` absent from `r`; the
/// cheapest such pair is preferred.
fn explicit_variable(eqs: &[MultiPoly]) -> Option<(usize, usize)> {
    let mut best: Option<((usize, u32), usize, usize)> = None;
    for (k, e) in eqs.iter().enumerate() {
        for v in e.occurring_vars() {
            if e.degree_in(v) != 1 || !e.leading_coeff_in(v).is_constant() {
                continue;
            }
            let cost = (e.num_terms(), e.total_degree());
            if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                best = Some((cost, k, v));
            }
        }
    }
    best.map(|(_, k, v)| (k, v))
}

fn solve_rec(
    ring: &RingRef,
    eqs: Vec<MultiPoly>,
    mut bindings: Vec<Option<Binding>>,
    required: &[bool],
    cap: u32,
    out: &mut Found,
) -> Result<()> {
    let Some(mut eqs) = normalize(eqs) else {
        return Ok(());
    };
    let mut reduced = false;
    loop {
        if eqs.is_empty() {
            finish(ring, &bindings, required, out);
            return Ok(());
        }
        if let Some((k, v)) = explicit_variable(&eqs) {
            let e = eqs.swap_remove(k);
            let coeffs = e.coefficients_in(v);
            let a = coeffs[1].constant_value().expect("constant coefficient");
            let expr = (-&coeffs[0]).scale(&a.inv().expect("nonzero"));
            let rest: Vec<MultiPoly> = eqs.iter().map(|q| q.substitute_at(v, &expr)).collect();
            bindings[v] = Some(match expr.constant_value() {
                Some(c) => Binding::Value(c),
                None => Binding::Expr(expr),
            });
            match normalize(rest) {
                Some(r) => eqs = r,
                None => return Ok(()),
            }
            reduced = false;
            continue;
        }
        if let Some(e) = eqs
            .iter()
            .filter(|e| e.occurring_vars().len() == 1)
            .min_by_key(|e| e.total_degree())
        {
            let v = e.occurring_vars()[0];
            let report = roots_in_field(e, v, ring.field())?;
            for r in report.roots {
                let value = MultiPoly::constant(ring, r.clone());
                let branch: Vec<MultiPoly> = eqs.iter().map(|q| q.substitute_at(v, &value)).collect();
                let mut b = bindings.clone();
                b[v] = Some(Binding::Value(r));
                solve_rec(ring, branch, b, required, cap, out)?;
            }
            return Ok(());
        }
        if reduced {
            out.families.push(resolve(ring, &bindings));
            return Ok(());
        }
        if let Some(r) = bivariate_eliminant(&eqs)? {
            if r.is_constant() {
                return Ok(());
            }
            let u = r.occurring_vars()[0];
            let report = roots_in_field(&r, u, ring.field())?;
            for root in report.roots {
                let value = MultiPoly::constant(ring, root.clone());
                let branch: Vec<MultiPoly> = eqs.iter().map(|q| q.substitute_at(u, &value)).collect();
                let mut b = bindings.clone();
                b[u] = Some(Binding::Value(root));
                solve_rec(ring, branch, b, required, cap, out)?;
            }
            return Ok(());
        }
        let gb = buchberger_with_cap(&eqs, MonomialOrder::Lex, cap)?;
        if gb.is_unit() {
            return Ok(());
        }
        eqs = gb.basis().to_vec();
        reduced = true;
    }
}

/// With exactly two unknowns left, a nonzero resultant of two equations
/// eliminating the second one. Every common zero has its first coordinate
/// among the roots of this univariate polynomial, so branching on them is
/// complete and avoids Groebner coefficient growth on dense systems.
fn bivariate_eliminant(eqs: &[MultiPoly]) -> Result<Option<MultiPoly>> {
    let mut vars: Vec<usize> = eqs.iter().flat_map(MultiPoly::occurring_vars).collect();
    vars.sort_unstable();
    vars.dedup();
    let [_, v] = vars[..] else {
        return Ok(None);
    };
    let mut with_v: Vec<&MultiPoly> = eqs.iter().filter(|e| e.degree_in(v) > 0).collect();
    with_v.sort_by_key(|e| (e.degree_in(v), e.total_degree()));
    for (k, e1) in with_v.iter().enumerate() {
        for e2 in &with_v[k + 1..] {
            let r = resultant(e1, e2, v)?;
            if !r.is_zero() {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Constant values of the unknowns after resolving the elimination chain.
fn resolve(ring: &RingRef, bindings: &[Option<Binding>]) -> Partial {
    let mut values: Vec<Option<MultiPoly>> = vec![None; ring.nvars()];
    let mut pending: Vec<usize> = Vec::new();
    for (k, b) in bindings.iter().enumerate() {
        match b {
            Some(Binding::Value(c)) => values[k] = Some(MultiPoly::constant(ring, c.clone())),
            Some(Binding::Expr(_)) => pending.push(k),
            None => {}
        }
    }
    // an expression never mentions an unknown eliminated before it, so
    // substituting until nothing changes resolves the chain
    let mut progress = true;
    while progress {
        progress = false;
        for &k in &pending {
            let Some(Binding::Expr(e)) = &bindings[k] else { unreachable!() };
            let mut cur = values[k].clone().unwrap_or_else(|| e.clone());
            for v in cur.occurring_vars() {
                if let Some(val) = &values[v] {
                    cur = cur.substitute_at(v, val);
                }
            }
            if values[k].as_ref() != Some(&cur) {
                values[k] = Some(cur);
                progress = true;
            }
        }
    }
    values
        .iter()
        .map(|v| v.as_ref().and_then(MultiPoly::constant_value))
        .collect()
}

fn finish(ring: &RingRef, bindings: &[Option<Binding>], required: &[bool], out: &mut Found) {
    let values = resolve(ring, bindings);
    let complete = values.iter().zip(required).all(|(v, &r)| !r || v.is_some());
    if complete {
        out.points.push(values);
    } else {
        out.families.push(values);
    }
}
