use crate::error_models::{ErrorModel, Noise};
use crate::par;
use crate::registry;
use crate::scalar::Real;
use crate::sequences::{Gate, PulseSequence};
use crate::su2::Unitary;
use crate::Result;

/// Linear over-rotation magnitudes of the table rows.
pub const TABLE1_EPS: [&str; 6] = ["0.3", "0.1", "0.03", "0.01", "0.003", "0.001"];

/// Column headings and the registry names that build them.
pub const TABLE1_COLUMNS: [(&str, &str); 6] = [
    ("naive", "naive"),
    ("B2 (BB1)", "b2"),
    ("B4", "b4"),
    ("π/3 Y", "pi3:Y"),
    ("π/3 Y ∘ B2", "pi3Y∘b2sym"),
    ("π/3 Y ∘ B4", "pi3Y∘b4sym"),
];

/// Reference infidelities of the exp(iπ/2 X) pulse, rows as in
/// [`TABLE1_EPS`], columns as in [`TABLE1_COLUMNS`].
pub const TABLE1_REFERENCE: [[f64; 6]; 6] = [
    [1.1e-1, 3.0e-3, 7.2e-5, 4.9e-2, 1.0e-3, 2.4e-5],
    [1.2e-2, 4.6e-6, 1.6e-9, 6.5e-4, 1.6e-7, 5.6e-11],
    [1.1e-3, 3.4e-9, 9.7e-15, 5.2e-6, 1.0e-11, 2.9e-17],
    [1.2e-4, 4.7e-12, 1.7e-19, 6.4e-8, 1.6e-15, 5.5e-23],
    [1.1e-5, 3.4e-15, 9.8e-25, 5.1e-10, 1.0e-19, 2.9e-29],
    [1.2e-6, 4.7e-18, 1.7e-29, 6.3e-12, 1.5e-23, 5.5e-35],
];

#[derive(Clone, Debug, PartialEq)]
pub struct Table1<T> {
    pub eps: Vec<T>,
    /// `cells[row][column]`
    pub cells: Vec<Vec<T>>,
}

impl<T: Real> Table1<T> {
    /// Aligned text with two significant figures.
    pub fn render(&self) -> String {
        let mut out = format!("{:<8}", "eps");
        for (name, _) in TABLE1_COLUMNS {
            out.push_str(&format!("{name:>14}"));
        }
        out.push('\n');
        for (e, row) in self.eps.iter().zip(&self.cells) {
            out.push_str(&format!("{:<8}", e.to_f64()));
            for c in row {
                out.push_str(&format!("{:>14}", c.to_sci(2)));
            }
            out.push('\n');
        }
        out
    }
}

/// Infidelity of `seq` under linear over-rotation `eps` on every pulse.
pub fn table1_cell<T: Real>(seq: &PulseSequence<T>, eps: &T) -> Result<T> {
    let noise = Noise::from(ErrorModel::LinearOverRotation { eps: eps.clone() });
    let actual = seq.evaluate(&noise, &T::one(), false)?;
    Ok(Unitary::infidelity(&seq.ideal_target()?, &actual))
}

/// All 36 table entries at the current precision.
pub fn table1<T: Real>() -> Result<Table1<T>> {
    let gate = Gate::x_pi();
    let seqs = TABLE1_COLUMNS
        .iter()
        .map(|(_, name)| registry::build::<T>(name, &gate))
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<T> = TABLE1_EPS.iter().map(|s| T::parse_str(s).expect("literal")).collect();
    let jobs: Vec<(usize, usize)> = (0..eps.len()).flat_map(|r| (0..seqs.len()).map(move |c| (r, c))).collect();
    let values = par::map(&jobs, |&(r, c)| table1_cell(&seqs[c], &eps[r]));
    let mut cells = vec![Vec::with_capacity(seqs.len()); eps.len()];
    for ((r, _), v) in jobs.iter().zip(values) {
        cells[*r].push(v?);
    }
    Ok(Table1 { eps, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_eps_is_zero() {
        let gate = Gate::<f64>::x_pi();
        for (_, name) in TABLE1_COLUMNS {
            let s = registry::build(name, &gate).unwrap();
            assert!(table1_cell(&s, &0.0).unwrap() < 1e-30, "{name}");
        }
    }

    #[test]
    fn naive_column_closed_form() {
        let gate = Gate::<f64>::x_pi();
        let s = registry::build("naive", &gate).unwrap();
        for e in [0.3, 0.1, 0.03] {
            let oracle = 1.0 - (std::f64::consts::PI * e / 2.0).cos();
            assert!((table1_cell(&s, &e).unwrap() - oracle).abs() < 1e-15);
        }
    }
}
