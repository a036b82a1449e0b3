use std::fmt::Write as _;
use std::str::FromStr;

use crate::error_models::Noise;
use crate::par;
use crate::scalar::Real;
use crate::sequences::PulseSequence;
use crate::su2::Unitary;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Cx,
    Cy,
    Cz,
    Infidelity,
}

impl Column {
    pub const ALL: [Column; 4] = [Column::Cx, Column::Cy, Column::Cz, Column::Infidelity];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["cx", "cy", "cz", "infidelity"][self.index()]
    }
}

impl FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cx" | "x" => Ok(Column::Cx),
            "cy" | "y" => Ok(Column::Cy),
            "cz" | "z" => Ok(Column::Cz),
            "infidelity" | "inf" => Ok(Column::Infidelity),
            _ => Err(Error::Config(format!("unknown column `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow<T> {
    pub scale: T,
    /// `|cx|, |cy|, |cz|, infidelity`, or `None` when the row is flagged.
    pub values: Option<[T; 4]>,
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult<T> {
    /// Rows in strictly decreasing scale.
    pub rows: Vec<ScanRow<T>>,
    pub sequence: String,
    pub model: String,
    pub digits: u32,
}

impl<T: Real> ScanResult<T> {
    pub fn with_sequence_id(mut self, id: impl Into<String>) -> Self {
        self.sequence = id.into();
        self
    }

    /// `(scale, value)` pairs of unflagged rows.
    pub fn column(&self, c: Column) -> Vec<(T, T)> {
        self.rows
            .iter()
            .filter_map(|r| r.values.as_ref().map(|v| (r.scale.clone(), v[c.index()].clone())))
            .collect()
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.flag.is_some()).count()
    }

    /// CSV with header `epsilon,cx,cy,cz,infidelity`; flagged rows carry
    /// `nan` cells.
    pub fn to_csv(&self) -> String {
        let sig = self.digits as usize;
        let mut out = String::from("epsilon,cx,cy,cz,infidelity\n");
        for r in &self.rows {
            out.push_str(&r.scale.to_sci(sig));
            match &r.values {
                Some(v) => v.iter().for_each(|x| {
                    let _ = write!(out, ",{}", x.to_sci(sig));
                }),
                None => out.push_str(",nan,nan,nan,nan"),
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates `seq` at each scale. Rows whose evaluation leaves the
/// principal branch are kept and flagged.
pub fn component_scan<T: Real>(
    seq: &PulseSequence<T>,
    noise: &Noise<T>,
    scales: &[T],
    perfect_pi3: bool,
) -> Result<ScanResult<T>> {
    if let Some(bad) = scales.iter().find(|s| !(**s > T::zero())) {
        return Err(Error::Config(format!("scan scales must be positive, got {bad}")));
    }
    let mut sorted = scales.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite scales"));
    sorted.dedup();
    let ideal = seq.ideal_target()?;
    let rows = par::map(&sorted, |s| match seq.evaluate(noise, s, perfect_pi3) {
        Ok(actual) => {
            let [cx, cy, cz] = Unitary::trace_components(&ideal, &actual).to_array();
            let inf = Unitary::infidelity(&ideal, &actual);
            ScanRow { scale: s.clone(), values: Some([cx.abs(), cy.abs(), cz.abs(), inf]), flag: None }
        }
        Err(e) => ScanRow { scale: s.clone(), values: None, flag: Some(e.to_string()) },
    });
    Ok(ScanResult { rows, sequence: String::new(), model: noise.describe(), digits: T::digits() })
}

/// Logarithmic grid `lo:hi:per_decade`, listed from `hi` down to `lo`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { lo: 1e-4, hi: 1e-1, per_decade: 9 }
    }
}

impl Grid {
    pub fn new(lo: f64, hi: f64, per_decade: u32) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite() && per_decade > 0) {
            return Err(Error::Config(format!("bad grid {lo}:{hi}:{per_decade}")));
        }
        Ok(Grid { lo, hi, per_decade })
    }

    /// Points `hi·10^(−k/per_decade)`, each rounded to 12 significant
    /// digits in decimal and then read at run precision, so decades are
    /// exact.
    pub fn points<T: Real>(&self) -> Vec<T> {
        let decades = (self.hi / self.lo).log10();
        let n = (decades * self.per_decade as f64).round() as i64;
        (0..=n)
            .map(|k| {
                let v = self.hi * 10f64.powf(-(k as f64) / self.per_decade as f64);
                let s = format!("{v:.11e}");
                T::parse_str(&s).unwrap_or_else(|| T::from_f64(v))
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid must be lo:hi:per_decade, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, pd] = parts.as_slice() else { return Err(bad()) };
        Grid::new(
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
            pd.parse().map_err(|_| bad())?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_models::ErrorModel;
    use crate::sequences::{naive, pi3_correct, Gate};
    use crate::su2::Vec3;
    use crate::Ext;

    #[test]
    fn zero_model_gives_zero_rows() {
        let seq = naive(&Gate::<f64>::x_pi());
        let r = component_scan(&seq, &Noise::none(), &[0.1, 0.01], false).unwrap();
        for row in &r.rows {
            assert!(row.values.as_ref().unwrap().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn rows_are_descending_and_deduplicated() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::LinearOverRotation { eps: 1.0 });
        let r = component_scan(&seq, &noise, &[0.01, 0.1, 0.01, 0.03], false).unwrap();
        let s: Vec<f64> = r.rows.iter().map(|x| x.scale).collect();
        assert_eq!(s, vec![0.1, 0.03, 0.01]);
        assert!(component_scan(&seq, &noise, &[0.1, -0.1], false).is_err());
    }

    #[test]
    fn naive_matches_closed_form() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::LinearOverRotation { eps: 1.0 });
        let r = component_scan(&seq, &noise, &[0.1], false).unwrap();
        let inf = r.rows[0].values.as_ref().unwrap()[3];
        let oracle = 1.0 - (std::f64::consts::PI * 0.1 / 2.0).cos();
        assert!((inf - oracle).abs() < 1e-15);
    }

    #[test]
    fn branch_rows_are_flagged() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::CovariantVector {
            delta: [crate::error_models::AngleFn::constant(1.0), crate::error_models::AngleFn::zero(), crate::error_models::AngleFn::zero()],
        });
        let r = component_scan(&seq, &noise, &[2.0, 0.1], false).unwrap();
        assert_eq!(r.flagged(), 1);
        assert!(r.to_csv().contains("nan"));
        assert_eq!(r.column(Column::Infidelity).len(), 1);
    }

    #[test]
    fn z_component_third_order_coefficient() {
        let u = Gate::<Ext>::new(Vec3::from_f64([1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]), crate::PiAngle::new(2, 9));
        let seq = pi3_correct(&naive(&u), &Vec3::unit_x()).unwrap();
        let noise = Noise::from(ErrorModel::CovariantVector {
            delta: [
                crate::error_models::AngleFn::zero(),
                crate::error_models::AngleFn::zero(),
                crate::error_models::AngleFn::constant(Ext::one()),
            ],
        });
        let eps = Ext::from_f64(1e-6);
        let r = component_scan(&seq, &noise, std::slice::from_ref(&eps), true).unwrap();
        let cz = r.rows[0].values.as_ref().unwrap()[2].clone();
        let ratio = (cz / eps.powi(3)).to_f64();
        assert!((ratio - 2.0).abs() < 1e-5, "{ratio}");
    }

    #[test]
    fn grid_points() {
        let g: Grid = "1e-4:1e-1:9".parse().unwrap();
        let p: Vec<f64> = g.points();
        assert_eq!(p.len(), 28);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[9], 0.01);
        assert!((p[27] - 1e-4).abs() < 1e-16);
        assert!(p.windows(2).all(|w| w[0] > w[1]));
        assert!("1:0.1:9".parse::<Grid>().is_err());
        assert!("a:b".parse::<Grid>().is_err());
    }

    #[test]
    fn csv_is_deterministic() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::LinearOverRotation { eps: 1.0 });
        let scales: Vec<f64> = Grid::default().points();
        let a = component_scan(&seq, &noise, &scales, false).unwrap().to_csv();
        let b = component_scan(&seq, &noise, &scales, false).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("epsilon,cx,cy,cz,infidelity\n"));
    }
}
