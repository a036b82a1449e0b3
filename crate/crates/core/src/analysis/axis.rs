use crate::error_models::Noise;
use crate::scalar::Real;
use crate::sequences::PulseSequence;
use crate::su2::{Unitary, Vec3};
use crate::Result;

/// In-plane correction axis. `degenerate` is set when the xy projection of
/// the error vanished at run precision and x̂ was returned by convention.
#[derive(Clone, Debug, PartialEq)]
pub struct XyAxis<T> {
    pub axis: Vec3<T>,
    pub degenerate: bool,
}

/// Unit axis in the xy-plane orthogonal to the xy projection of the error
/// vector of `seq` at `probe_scale`. The sign is fixed so that the y
/// component is positive, or the x component when y vanishes.
pub fn xy_error_axis<T: Real>(
    seq: &PulseSequence<T>,
    noise: &Noise<T>,
    probe_scale: &T,
    perfect_pi3: bool,
) -> Result<XyAxis<T>> {
    let ideal = seq.ideal_target()?;
    let actual = seq.evaluate(noise, probe_scale, perfect_pi3)?;
    let e = Unitary::error_unitary(&ideal, &actual).log_pauli()?;
    let r = (e.x.square() + e.y.square()).sqrt();
    if r <= T::noise_floor(3) {
        return Ok(XyAxis { axis: Vec3::unit_x(), degenerate: true });
    }
    let (mut ax, mut ay) = (-e.y.clone() / r.clone(), e.x.clone() / r);
    let floor = T::noise_floor(3);
    if ay < -floor.clone() || (ay.abs() <= floor && ax < T::zero()) {
        ax = -ax;
        ay = -ay;
    }
    Ok(XyAxis { axis: Vec3::new(ax, ay, T::zero()), degenerate: false })
}

/// Fidelity error `1 − |⟨±|U†Ū|±⟩|²` on the |±⟩ inputs; both inputs give
/// `y² + z²` of the error quaternion.
pub fn pm_fidelity_error<T: Real>(ideal: &Unitary<T>, actual: &Unitary<T>) -> T {
    let v = Unitary::error_unitary(ideal, actual);
    v.y.square() + v.z.square()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_models::{AngleFn, ErrorModel};
    use crate::sequences::{b2, naive, symmetrize, Gate};
    use crate::Ext;

    #[test]
    fn pure_z_error_is_degenerate() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::CovariantVector {
            delta: [AngleFn::zero(), AngleFn::zero(), AngleFn::constant(1.0)],
        });
        let a = xy_error_axis(&seq, &noise, &1e-3, true).unwrap();
        assert!(a.degenerate);
        assert_eq!(a.axis, Vec3::unit_x());
    }

    #[test]
    fn symmetrized_b2_gives_y() {
        let seq = symmetrize(&b2(&Gate::<Ext>::x_pi()).unwrap()).unwrap();
        let noise = Noise::from(ErrorModel::LinearOverRotation { eps: Ext::one() });
        let a = xy_error_axis(&seq, &noise, &Ext::from_f64(1e-3), true).unwrap();
        assert!(!a.degenerate);
        assert!((a.axis.y.to_f64() - 1.0).abs() < 1e-6, "{:?}", a.axis);
    }

    #[test]
    fn orthogonal_to_error() {
        let seq = naive(&Gate::<f64>::x_pi());
        let noise = Noise::from(ErrorModel::CovariantVector {
            delta: [AngleFn::constant(0.6), AngleFn::constant(0.8), AngleFn::zero()],
        });
        let a = xy_error_axis(&seq, &noise, &1e-3, true).unwrap();
        assert!((a.axis.x * 0.6 + a.axis.y * 0.8).abs() < 1e-9);
        assert!(a.axis.y > 0.0);
    }

    #[test]
    fn pm_fidelity_matches_matrix_oracle() {
        use num_complex::Complex64 as C;
        let ideal = Unitary::from_generator(&Vec3::from_f64([0.0, 0.6, 0.8]), &0.4).unwrap();
        let actual = ideal.clone() * Unitary::exp_vector(&Vec3::from_f64([0.01, -0.02, 0.03]));
        let v = Unitary::error_unitary(&ideal, &actual);
        let i = C::new(0.0, 1.0);
        let m = [[v.w + i * v.z, i * v.x + v.y], [i * v.x - v.y, v.w - i * v.z]];
        for s in [1.0, -1.0] {
            let psi = [C::new(1.0, 0.0) / 2f64.sqrt(), C::new(s, 0.0) / 2f64.sqrt()];
            let mut amp = C::new(0.0, 0.0);
            for r in 0..2 {
                for c in 0..2 {
                    amp += psi[r].conj() * m[r][c] * psi[c];
                }
            }
            assert!((1.0 - amp.norm_sqr() - pm_fidelity_error(&ideal, &actual)).abs() < 1e-15);
        }
    }
}
