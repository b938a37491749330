//! `sweep`: probability curves sampled on uniform grids.

use fanstate_core::{
    fan_schedule, p1_closed_form, pk_paper_formula, run_protocol, single_atom_probability, AtomPreparation,
    Outcome, TauOrder, C64,
};

use crate::output::Table;
use crate::CliError;

/// Atom counts of the P_k sweep, giving k = 1, 2, 4, 8.
pub const PK_ATOMS: [usize; 4] = [2, 3, 4, 5];

/// `n` evenly spaced samples of `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize, name: &str) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(CliError::Usage(format!("{name} range must be finite")));
    }
    if lo > hi {
        return Err(CliError::Usage(format!("{name} range is empty: {lo} > {hi}")));
    }
    match n {
        0 => Err(CliError::Usage(format!("{name} needs at least one sample"))),
        1 => Ok(vec![lo]),
        _ => Ok((0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}

fn check_radii(rs: &[f64]) -> Result<(), CliError> {
    match rs.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        Some(r) => Err(CliError::Usage(format!("field modulus must be finite and >= 0, got {r}"))),
        None => Ok(()),
    }
}

/// Single-atom outcome probabilities, long format: one row per `(r, τ)`.
/// Column `p_a_b` is the probability of detecting `b` for an atom prepared in `a`.
pub fn single_atom_table(radii: &[f64], taus: &[f64]) -> Result<Table, CliError> {
    if radii.is_empty() {
        return Err(CliError::Usage("--radii must not be empty".into()));
    }
    check_radii(radii)?;
    use Outcome::{Minus, Plus};
    let cases = [(Plus, Plus), (Minus, Plus), (Minus, Minus), (Plus, Minus)];
    let mut table = Table::new(["r", "tau", "p_plus_plus", "p_minus_plus", "p_minus_minus", "p_plus_minus"]);
    for &r in radii {
        for &tau in taus {
            let mut row = vec![r, tau];
            row.extend(
                cases
                    .iter()
                    .map(|&(prep, det)| single_atom_probability(&AtomPreparation::pure(prep), det, tau, r)),
            );
            table.push(row);
        }
    }
    Ok(table)
}

/// Two-atom probability for the `k = 1` fan-state. The `p1_*` columns are the
/// product of intermediate norms; `record` is the final-state norm.
pub fn p1_table(rs: &[f64], only: Option<TauOrder>) -> Result<Table, CliError> {
    check_radii(rs)?;
    let orders: Vec<(TauOrder, &str)> = [(TauOrder::PiFirst, "p1_pi_first"), (TauOrder::HalfPiFirst, "p1_half_pi_first")]
        .into_iter()
        .filter(|(o, _)| only.map_or(true, |w| w == *o))
        .collect();
    let mut columns = vec!["r"];
    columns.extend(orders.iter().map(|(_, n)| *n));
    columns.push("record");
    let mut table = Table::new(columns);
    for &r in rs {
        let mut row = vec![r];
        row.extend(orders.iter().map(|(o, _)| p1_closed_form(r, *o)));
        row.push(run_protocol(C64::new(r, 0.0), &TauOrder::PiFirst.schedule(Outcome::Minus)).record_probability);
        table.push(row);
    }
    Ok(table)
}

/// Fan generation probability for k = 1, 2, 4, 8 in both conventions.
pub fn pk_table(rs: &[f64]) -> Result<Table, CliError> {
    check_radii(rs)?;
    let ks = PK_ATOMS.map(|n| 1usize << (n - 2));
    let mut columns: Vec<String> = vec!["r".into()];
    columns.extend(ks.iter().map(|k| format!("pk_k{k}")));
    columns.extend(ks.iter().map(|k| format!("record_k{k}")));
    let mut table = Table::new(columns);
    let schedules: Vec<_> = PK_ATOMS
        .iter()
        .map(|&n| fan_schedule(n, Outcome::Minus))
        .collect::<Result<_, _>>()?;
    for &r in rs {
        let mut row = vec![r];
        for &n in &PK_ATOMS {
            row.push(pk_paper_formula(r, n)?);
        }
        for s in &schedules {
            row.push(run_protocol(C64::new(r, 0.0), s).record_probability);
        }
        table.push(row);
    }
    Ok(table)
}
