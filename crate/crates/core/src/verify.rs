//! Named, exhaustive identity checks over a list of fields.
//!
//! Each check compares two independently computed quantities and stops at
//! the first counterexample. [`run`] drives every check over its field list
//! in parallel and returns results in a fixed order.

use rayon::prelude::*;

use crate::charsum::{
    b_coeffs, generating_function_holds, h_identity_holds, printed_clause_sums, sum_table,
    sums_bruteforce,
};
use crate::dickson::{
    f3_eval_coeff_with, f3_eval_functional, f3_values, fn_aux, frobenius_lift,
    jacobsthal_substitution, quarter_point_value, reversed_dickson_coeffs, Kind, OddField,
};
use crate::error::Result;
use crate::gf::DensePoly;
use crate::permcheck::{
    build_v, exact_criterion_pk, is_bijection, product_membership_scan, square_membership_scan, prime_power_shape,
    scan,
};

pub type CheckFn = fn(&OddField) -> std::result::Result<(), String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

pub struct Check {
    pub name: &'static str,
    /// Field orders used at [`Level::Full`] unless overridden.
    pub full_fields: &'static [(u64, u32)],
    pub run: CheckFn,
}

const ALL8: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3)];
const SMALL4: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1), (3, 2)];
const PRIME6: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)];
const SUM5: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)];
const GENFN: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1)];
pub const QUICK: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1)];

pub const CHECKS: &[Check] = &[
    Check { name: "three-oracle", full_fields: ALL8, run: three_oracle },
    Check { name: "quarter-point", full_fields: ALL8, run: quarter_point },
    Check { name: "kind-relation", full_fields: SMALL4, run: kind_relation },
    Check { name: "frobenius-lift", full_fields: SMALL4, run: frobenius },
    Check { name: "periodicity", full_fields: SMALL4, run: periodicity },
    Check { name: "aux-poly-identity", full_fields: PRIME6, run: aux_identity },
    Check { name: "self-reciprocal", full_fields: PRIME6, run: self_reciprocal },
    Check { name: "period-six", full_fields: PRIME6, run: period_six },
    Check { name: "known-values", full_fields: ALL8, run: known_values },
    Check { name: "quadratic-membership", full_fields: SMALL4, run: quadratic_membership },
    Check { name: "v-set", full_fields: SMALL4, run: v_set },
    Check { name: "square-criterion", full_fields: SMALL4, run: square_criterion },
    Check { name: "scan-invariants", full_fields: ALL8, run: scan_invariants },
    Check { name: "aux-poly-pp", full_fields: SMALL4, run: aux_poly_pp },
    Check { name: "b-closed-form", full_fields: SUM5, run: b_closed },
    Check { name: "h-identity", full_fields: SUM5, run: h_identity },
    Check { name: "sum-recursion", full_fields: SUM5, run: sum_recursion },
    Check { name: "printed-sum-clauses", full_fields: SUM5, run: printed_clauses },
    Check { name: "generating-function", full_fields: GENFN, run: generating_function },
];

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub p: u64,
    pub e: u32,
    pub outcome: std::result::Result<(), String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }
}

/// Runs every check. `fields` overrides the per-check lists; otherwise
/// `Quick` uses q in {3, 5, 7} and `Full` each check's own list.
pub fn run(level: Level, fields: Option<&[(u64, u32)]>) -> Result<Vec<CheckResult>> {
    let mut jobs = Vec::new();
    for check in CHECKS {
        let list = match (fields, level) {
            (Some(f), _) => f,
            (None, Level::Quick) => QUICK,
            (None, Level::Full) => check.full_fields,
        };
        for &(p, e) in list {
            jobs.push((check, p, e));
        }
    }
    let mut fields_cache = std::collections::BTreeMap::new();
    for &(_, p, e) in &jobs {
        if let std::collections::btree_map::Entry::Vacant(v) = fields_cache.entry((p, e)) {
            v.insert(OddField::make(p, e)?);
        }
    }
    Ok(jobs
        .par_iter()
        .map(|&(check, p, e)| CheckResult {
            name: check.name,
            p,
            e,
            outcome: (check.run)(&fields_cache[&(p, e)]),
        })
        .collect())
}

fn fail<T: std::fmt::Debug>(what: &str, detail: T) -> std::result::Result<(), String> {
    Err(format!("{what}: {detail:?}"))
}

fn q_squared_minus_one(f: &OddField) -> u64 {
    f.order() * f.order() - 1
}

fn three_oracle(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    let xs = f.enumerate();
    let tables: Vec<_> = xs.iter().map(|x| f3_values(f, n_max, x)).collect();
    for n in 0..=n_max {
        let poly = reversed_dickson_coeffs(f, n, Kind::THIRD);
        for (x, table) in xs.iter().zip(&tables) {
            let rec = &table[n as usize];
            let coeff = f3_eval_coeff_with(f, &poly, n, &f.one(), x);
            let func = f3_eval_functional(f, n, x).map_err(|e| e.to_string())?;
            let jac = jacobsthal_substitution(f, n, x);
            if *rec != coeff || *rec != func || *rec != jac {
                return fail("n, x, [recurrence, coeff, functional, jacobsthal]", (n, x, [rec, &coeff, &func, &jac]));
            }
        }
    }
    Ok(())
}

fn quarter_point(f: &OddField) -> std::result::Result<(), String> {
    let n_max = 2 * f.order() * f.order();
    let values = f3_values(f, n_max, f.quarter());
    for (n, v) in values.iter().enumerate() {
        let expected = quarter_point_value(f, n as u64);
        if *v != expected {
            return fail("n", n);
        }
    }
    Ok(())
}

fn kind_relation(f: &OddField) -> std::result::Result<(), String> {
    for n in 0..=200 {
        let d = reversed_dickson_coeffs(f, n, Kind::FIRST);
        let e = reversed_dickson_coeffs(f, n, Kind::SECOND);
        let third = reversed_dickson_coeffs(f, n, Kind::THIRD);
        let rhs = e.scale(&f.int_scalar(2)).sub(&d).map_err(|e| e.to_string())?;
        if third != rhs {
            return fail("n", n);
        }
    }
    Ok(())
}

fn frobenius(f: &OddField) -> std::result::Result<(), String> {
    for k in 1..=2u32 {
        let pk = f.p().pow(k);
        for x in f.elements() {
            let values = f3_values(f, 50 * pk, &x);
            for n in 0..=50 {
                if values[(n * pk) as usize] != frobenius_lift(f, n, k, &x) {
                    return fail("n, k, x", (n, k, x));
                }
            }
        }
    }
    Ok(())
}

fn periodicity(f: &OddField) -> std::result::Result<(), String> {
    let period = q_squared_minus_one(f);
    for x in f.elements().filter(|x| x != f.quarter()) {
        let values = f3_values(f, 3 * period, &x);
        for n in 1..=2 * period {
            if values[n as usize] != values[(n + period) as usize] {
                return fail("n, x", (n, x));
            }
        }
    }
    Ok(())
}

fn aux_identity(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    let four = f.int_scalar(4);
    let xs = f.enumerate();
    let tables: Vec<_> = xs.iter().map(|x| f3_values(f, n_max, x)).collect();
    for n in 0..=n_max {
        let aux = fn_aux(f, n);
        let scale = if n == 0 {
            f.int_scalar(2)
        } else {
            f.pow(f.half(), n - 1)
        };
        for (x, table) in xs.iter().zip(&tables) {
            let arg = f.sub(&f.one(), &f.mul(&four, x));
            if table[n as usize] != f.mul(&scale, &aux.eval(&arg)) {
                return fail("n, x", (n, x));
            }
        }
    }
    Ok(())
}

fn self_reciprocal(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    for n in (2..=n_max).step_by(2).filter(|n| n % f.p() != 0) {
        let aux = fn_aux(f, n);
        for x in f.elements().skip(1) {
            let inv = f.inv(&x).map_err(|e| e.to_string())?;
            let rhs = f.mul(&f.pow(&x, (n - 1) / 2), &aux.eval(&inv));
            if aux.eval(&x) != rhs {
                return fail("n, x", (n, x));
            }
        }
    }
    Ok(())
}

fn period_six(f: &OddField) -> std::result::Result<(), String> {
    let pattern = [0i64, 1, 1, 0, -1, -1];
    let values = f3_values(f, 100, &f.one());
    for (n, v) in values.iter().enumerate() {
        let expected = DensePoly::from_ints(f, &[pattern[n % 6]]).coeff(0);
        if *v != expected {
            return fail("n", n);
        }
    }
    Ok(())
}

fn known_values(f: &OddField) -> std::result::Result<(), String> {
    for x in f.elements() {
        let v = f3_values(f, 2, &x);
        if !v[0].is_zero() || v[1] != f.one() || v[2] != f.one() {
            return fail("F_0, F_1, F_2 at x", x);
        }
    }
    let at_zero = f3_values(f, 200, &f.zero());
    if let Some(n) = (1..at_zero.len()).find(|&n| at_zero[n] != f.one()) {
        return fail("F_n(1, 0) != 1 at n", n);
    }
    Ok(())
}

fn quadratic_membership(f: &OddField) -> std::result::Result<(), String> {
    match product_membership_scan(f) {
        Ok(true) => Ok(()),
        Ok(false) => Err("counterexample in GF(q^2)".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn v_set(f: &OddField) -> std::result::Result<(), String> {
    build_v(f).map(|_| ()).map_err(|e| e.to_string())
}

fn square_criterion(f: &OddField) -> std::result::Result<(), String> {
    match square_membership_scan(f) {
        Ok(true) => Ok(()),
        Ok(false) => Err("counterexample in GF(q^2)".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn scan_invariants(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    let reports = scan(f, n_max).map_err(|e| e.to_string())?;
    if let Some(v) = reports.iter().flat_map(|r| r.violations()).next() {
        return Err(v);
    }
    // every n = p^k, 2p^k with k <= e, even past n_max
    for k in 1..=f.degree() {
        let pk = f.p().pow(k);
        for n in [pk, 2 * pk] {
            debug_assert!(prime_power_shape(f.p(), n).is_some());
            if n > n_max {
                let verdict = crate::permcheck::is_permutation(f, n);
                if exact_criterion_pk(f, n) != Some(verdict) {
                    return fail("exact criterion at n", n);
                }
            }
        }
    }
    Ok(())
}

fn aux_poly_pp(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    let xs = f.enumerate();
    let tables: Vec<_> = xs.iter().map(|x| f3_values(f, n_max, x)).collect();
    for n in 0..=n_max {
        let aux = fn_aux(f, n);
        let f_pp = is_bijection(f, tables.iter().map(|t| t[n as usize].clone()));
        let aux_pp = is_bijection(f, xs.iter().map(|x| aux.eval(x)));
        if f_pp != aux_pp {
            return fail("n", n);
        }
    }
    Ok(())
}

fn b_closed(f: &OddField) -> std::result::Result<(), String> {
    b_coeffs(f).map(|_| ()).map_err(|e| e.to_string())
}

fn h_identity(f: &OddField) -> std::result::Result<(), String> {
    if h_identity_holds(f) {
        Ok(())
    } else {
        Err("cross-multiplied h(z) forms differ".into())
    }
}

fn sum_recursion(f: &OddField) -> std::result::Result<(), String> {
    let n_max = q_squared_minus_one(f);
    let table = sum_table(f).map_err(|e| e.to_string())?;
    let brute = sums_bruteforce(f, n_max).map_err(|e| e.to_string())?;
    for n in 1..=n_max {
        let rec = table.sum(n).map_err(|e| e.to_string())?;
        if brute[n as usize - 1].prime_residue() != rec.prime_residue() {
            return fail("n", n);
        }
    }
    Ok(())
}

fn printed_clauses(f: &OddField) -> std::result::Result<(), String> {
    let table = sum_table(f).map_err(|e| e.to_string())?;
    let printed = printed_clause_sums(f, &table);
    match (1..printed.len()).find(|&n| printed[n] != table.f()[n]) {
        Some(n) => fail("n", n),
        None => Ok(()),
    }
}

fn generating_function(f: &OddField) -> std::result::Result<(), String> {
    let n_max = 2 * f.order() * f.order();
    match f.elements().find(|x| !generating_function_holds(f, x, n_max)) {
        Some(x) => fail("x", x),
        None => Ok(()),
    }
}
