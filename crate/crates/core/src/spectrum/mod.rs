//! The conjugation sum `x = Σ_g (g⁻¹ag, g⁻¹bg)` of a dessin, its exact
//! spectrum on `Q[G×G]`, and the fields attached to it.

mod element;
mod fields;
mod minpoly;
mod multiplicity;

use std::fmt;
use std::time::{Duration, Instant};

pub use element::{conjugation_sum, AlgebraElement, Verdict, DEFAULT_DENSE_CAP};
pub use fields::{
    field_k_power_maps, field_k_table, field_l, galois_group_of_l, predicted_eigenvalues,
    verify_predicted_are_roots, verify_tower, PredictedEigenvalue, Side,
};
pub use minpoly::{min_poly_of_x, resolve_strategy, Strategy, StrategyCaps, DEFAULT_KRYLOV_CAP};
pub use multiplicity::{eigenvalue_multiplicities, EigenvalueClass};

use crate::chartab::{character_table, CharacterTable, DEFAULT_CHARTAB_CAP};
use crate::dessin::{Dessin, Passport};
use crate::error::{Error, Result};
use crate::perm::DEFAULT_GROUP_CAP;
use crate::subfield::Subfield;
use crate::{RatPoly, Rational};

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeConfig {
    pub strategy: Strategy,
    pub dense_cap: usize,
    pub group_cap: usize,
    pub krylov_cap: usize,
    pub chartab_cap: usize,
    pub multiplicities: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            strategy: Strategy::Auto,
            dense_cap: DEFAULT_DENSE_CAP,
            group_cap: DEFAULT_GROUP_CAP,
            krylov_cap: DEFAULT_KRYLOV_CAP,
            chartab_cap: DEFAULT_CHARTAB_CAP,
            multiplicities: false,
        }
    }
}

impl AnalyzeConfig {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            self.dense_cap,
            self.group_cap,
            self.krylov_cap,
            self.chartab_cap,
        ];
        if caps.contains(&0) {
            return Err(Error::input("caps must be positive"));
        }
        if self.dense_cap > self.krylov_cap {
            return Err(Error::input("dense cap must not exceed the Krylov cap"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn from_verdict(name: &'static str, v: Verdict) -> Self {
        match v {
            Ok(()) => Check {
                name,
                status: CheckStatus::Pass,
                detail: String::new(),
            },
            Err(detail) => Check {
                name,
                status: CheckStatus::Fail,
                detail,
            },
        }
    }

    fn from_bool(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: if ok { String::new() } else { detail.into() },
        }
    }

    fn skipped(name: &'static str, why: impl Into<String>) -> Self {
        Check {
            name,
            status: CheckStatus::Skipped,
            detail: why.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub dessin: Dessin,
    pub passport: Passport,
    pub genus: usize,
    pub group_order: usize,
    pub exponent: u64,
    pub strategy: Strategy,
    pub min_poly: RatPoly,
    pub squarefree_min_poly: RatPoly,
    /// Whether the minimal polynomial is squarefree, i.e. `x` acts
    /// semisimply.
    pub semisimple: bool,
    pub field_k: Subfield,
    pub field_l: Subfield,
    pub field_k_exp: Subfield,
    pub field_k_ord: Subfield,
    pub galois_group_l: Vec<u64>,
    /// Absent when the group exceeds the character-table cap.
    pub character_degrees: Option<Vec<u64>>,
    pub predicted_eigenvalues: Option<Vec<PredictedEigenvalue>>,
    pub multiplicities: Option<Vec<EigenvalueClass>>,
    pub checks: Vec<Check>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl SpectrumReport {
    pub fn distinct_eigenvalues(&self) -> usize {
        self.squarefree_min_poly.degree().unwrap_or(0)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

struct Stopwatch {
    last: Instant,
    laps: Vec<(&'static str, Duration)>,
}

impl Stopwatch {
    fn new() -> Self {
        Stopwatch {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.laps.push((name, now - self.last));
        self.last = now;
    }
}

/// The whole pipeline for one dessin.
pub fn analyze(d: &Dessin, config: &AnalyzeConfig) -> Result<SpectrumReport> {
    config.validate()?;
    let mut clock = Stopwatch::new();
    let genus = d.genus()?;
    let passport = d.passport();
    let group = d.monodromy_group(config.group_cap)?;
    let order = group.order();
    let exponent = group.exponent();
    let caps = StrategyCaps {
        dense: config.dense_cap,
        krylov: config.krylov_cap,
    };
    // Refuse early, before any table work, when no strategy applies.
    resolve_strategy(config.strategy, order, caps)?;
    clock.lap("group");

    let x = conjugation_sum(&group)?;
    let (a, b) = (group.generators()[0], group.generators()[1]);
    let mut checks = vec![Check::from_verdict("commutation", x.verify_commutation())];
    clock.lap("conjugation_sum");

    let (min_poly, strategy) = min_poly_of_x(&x, config.strategy, caps)?;
    let squarefree = min_poly.squarefree_part_over_z();
    clock.lap("min_poly");

    let field_l = field_l(&squarefree, exponent)?;
    clock.lap("field_L");

    let table: Option<CharacterTable> = if order <= config.chartab_cap {
        Some(character_table(&group, config.chartab_cap)?)
    } else {
        None
    };
    clock.lap("character_table");

    let k_power = field_k_power_maps(&group, a, b)?;
    let mut predicted = None;
    match &table {
        Some(t) => {
            let orth = t
                .verify_row_orthogonality()
                .and_then(|_| t.verify_column_orthogonality())
                .map_err(|e| e.to_string());
            checks.push(Check::from_verdict("character_orthogonality", orth));
            let k_table = field_k_table(t, a, b)?;
            checks.push(Check::from_bool(
                "k_two_methods_agree",
                k_table == k_power,
                format!("power maps give {k_power}, table gives {k_table}"),
            ));
            let pred = predicted_eigenvalues(t, order, a, b);
            checks.push(Check::from_verdict(
                "predicted_are_roots",
                verify_predicted_are_roots(&min_poly, &pred),
            ));
            predicted = Some(pred);
        }
        None => {
            let why = format!(
                "group order {order} exceeds character-table cap {}",
                config.chartab_cap
            );
            checks.push(Check::skipped("character_orthogonality", why.clone()));
            checks.push(Check::skipped("k_two_methods_agree", why.clone()));
            checks.push(Check::skipped("predicted_are_roots", why));
        }
    }
    let order_q = Rational::from_integer((order as i64).into());
    checks.push(Check::from_bool(
        "order_is_eigenvalue",
        min_poly.eval(&order_q) == Rational::from_integer(0.into()),
        format!("|G| = {order} is not a root of {min_poly}"),
    ));
    clock.lap("field_k");

    let field_k_exp = Subfield::cyclotomic(exponent);
    let field_k_ord = Subfield::cyclotomic(order as u64);
    let (k_leq_l, l_leq_k, kexp_leq_kord) =
        verify_tower(&k_power, &field_l, &field_k_exp, &field_k_ord);
    checks.push(Check::from_bool(
        "k_leq_L",
        k_leq_l,
        format!("{k_power} is not inside {field_l}"),
    ));
    checks.push(Check::from_bool(
        "L_leq_K",
        l_leq_k,
        format!("{field_l} is not inside {field_k_exp}"),
    ));
    checks.push(Check::from_bool(
        "K_exp_leq_K_ord",
        kexp_leq_kord,
        format!("{field_k_exp} is not inside {field_k_ord}"),
    ));
    let galois = galois_group_of_l(&field_l);
    let galois_order: u64 = galois.iter().product();
    checks.push(Check::from_bool(
        "L_abelian",
        galois_order == field_l.degree()
            && galois.windows(2).all(|w| w[1] % w[0] == 0)
            && field_l.degree() * field_l.subgroup().len() as u64
                == crate::arith::euler_phi(field_l.conductor()),
        format!(
            "invariant factors {galois:?} do not describe a group of order [L:Q] = {}",
            field_l.degree()
        ),
    ));
    clock.lap("tower");

    let multiplicities = if config.multiplicities {
        let m = eigenvalue_multiplicities(&x, &squarefree, config.dense_cap)?;
        clock.lap("multiplicities");
        Some(m)
    } else {
        None
    };

    Ok(SpectrumReport {
        dessin: d.clone(),
        passport,
        genus,
        group_order: order,
        exponent,
        strategy,
        semisimple: min_poly == squarefree,
        min_poly,
        squarefree_min_poly: squarefree,
        field_k: k_power,
        field_l,
        field_k_exp,
        field_k_ord,
        galois_group_l: galois,
        character_degrees: table.as_ref().map(|t| t.degrees().to_vec()),
        predicted_eigenvalues: predicted,
        multiplicities,
        checks,
        timings: clock.laps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessin::parse_dessin;
    use crate::perm::Perm;

    fn run(s: &str) -> SpectrumReport {
        let r = analyze(&parse_dessin(s).unwrap(), &AnalyzeConfig::default()).unwrap();
        assert!(
            r.all_checks_pass(),
            "{s}: {:?}",
            r.failed_checks().collect::<Vec<_>>()
        );
        r
    }

    #[test]
    fn trivial_dessin() {
        let r = run("n=1 a=() b=()");
        assert_eq!(r.group_order, 1);
        assert!(r.field_l.is_rational() && r.field_k.is_rational() && r.field_k_exp.is_rational());
        assert_eq!(r.min_poly, RatPoly::from_i64(&[-1, 1]));
        assert!(r.checks.iter().all(|c| c.status == CheckStatus::Pass));
    }

    #[test]
    fn cyclic_three() {
        let r = run("n=3 a=(1 2 3) b=(1 2 3)");
        assert_eq!((r.group_order, r.genus), (3, 1));
        let q3 = Subfield::cyclotomic(3);
        assert_eq!((&r.field_l, &r.field_k, &r.field_k_exp), (&q3, &q3, &q3));
        assert_eq!(r.min_poly, RatPoly::from_i64(&[-27, 0, 0, 1]));
    }

    #[test]
    fn s3_dessin() {
        let r = run("n=3 a=(1 2 3) b=(1 2)");
        assert_eq!((r.group_order, r.genus), (6, 0));
        assert!(r.field_k.is_rational());
        assert!(r.field_l.leq(&Subfield::cyclotomic(6)));
        assert_eq!(r.strategy, Strategy::Dense);
    }

    /// For `Z_m` with `a = b = g`, `x = m·(g, g)` and left multiplication by
    /// `(g, g)` has order `m`, so the minimal polynomial is `t^m − m^m`.
    #[test]
    fn cyclic_closed_form() {
        for m in 1..=12usize {
            let cycle: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
            let c = if m == 1 {
                "()".to_string()
            } else {
                format!("({})", cycle.join(" "))
            };
            let r = run(&format!("n={m} a={c} b={c}"));
            let mut coeffs = vec![0i64; m + 1];
            coeffs[0] = -(m as i64).pow(m as u32);
            coeffs[m] = 1;
            assert_eq!(r.min_poly, RatPoly::from_i64(&coeffs), "Z{m}");
            assert_eq!(r.field_l, Subfield::cyclotomic(m as u64), "Z{m}");
        }
    }

    #[test]
    fn relabeling_does_not_change_fields() {
        let d = parse_dessin("n=4 a=(1 2 3 4) b=(1 3)").unwrap();
        let g = Perm::from_cycles(4, &[vec![0, 2, 1], vec![3]]).unwrap();
        let cfg = AnalyzeConfig::default();
        let r1 = analyze(&d, &cfg).unwrap();
        let r2 = analyze(&d.relabel(&g).unwrap(), &cfg).unwrap();
        assert_eq!(r1.min_poly, r2.min_poly);
        assert_eq!((r1.field_k, r1.field_l), (r2.field_k, r2.field_l));
    }

    #[test]
    fn caps_are_enforced() {
        let s5 = parse_dessin("n=5 a=(1 2 3 4 5) b=(1 2)").unwrap();
        let cfg = AnalyzeConfig {
            krylov_cap: 60,
            dense_cap: 24,
            ..Default::default()
        };
        assert!(matches!(analyze(&s5, &cfg), Err(Error::CapExceeded { .. })));
        let cfg = AnalyzeConfig {
            group_cap: 50,
            ..Default::default()
        };
        assert!(matches!(analyze(&s5, &cfg), Err(Error::CapExceeded { .. })));
        let cfg = AnalyzeConfig {
            dense_cap: 100,
            krylov_cap: 50,
            ..Default::default()
        };
        assert!(matches!(analyze(&s5, &cfg), Err(Error::Input(_))));
    }

    #[test]
    fn table_cap_skips_table_checks() {
        let d = parse_dessin("n=4 a=(1 2 3 4) b=(1 3)").unwrap();
        let cfg = AnalyzeConfig {
            chartab_cap: 4,
            ..Default::default()
        };
        let r = analyze(&d, &cfg).unwrap();
        assert!(r.predicted_eigenvalues.is_none());
        assert!(r.checks.iter().any(|c| c.status == CheckStatus::Skipped));
        assert!(r.all_checks_pass());
    }
}
