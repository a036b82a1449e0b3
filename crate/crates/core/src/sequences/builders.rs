use crate::error_models::FrameTriad;
use crate::scalar::Real;
use crate::sequences::{Channel, Gate, PiAngle, Pulse, PulseSequence, Role};
use crate::su2::Vec3;
use crate::{Error, Result};

/// The bare target pulse.
pub fn naive<T: Real>(gate: &Gate<T>) -> PulseSequence<T> {
    let p = Pulse::lab(gate.axis.clone(), gate.alpha, Role::Target, Channel::Target);
    PulseSequence::new(gate.clone(), vec![p])
}

/// One level of π/3 correction about `axis` applied to `inner`.
///
/// Time order: R̄_0†, S, R̄_t, S†, R̄_0, S, R̄_t†, where S is the inner
/// sequence, R_0 = exp(iπ/6 a·σ) and R_t = U R_0 U†. Correction pulses
/// go on the π/3 channel.
pub fn pi3_correct<T: Real>(inner: &PulseSequence<T>, axis: &Vec3<T>) -> Result<PulseSequence<T>> {
    let u = inner.target.unitary()?;
    let frame0 = FrameTriad::for_axis(axis)?;
    let r0 = Pulse::new(frame0.clone(), Vec3::unit_x(), PiAngle::new(1, 6), Role::Correction, Channel::Pi3);
    let mut rt = Pulse::new(frame0.transformed(&u), Vec3::unit_x(), PiAngle::new(1, 6), Role::Correction, Channel::Pi3);
    rt.transported = true;

    let s = &inner.pulses;
    let s_dag = inner.dagger_pulses();
    let mut pulses = Vec::with_capacity(3 * s.len() + 4);
    pulses.push(r0.inverse());
    pulses.extend_from_slice(s);
    pulses.push(rt.clone());
    pulses.extend(s_dag);
    pulses.push(r0);
    pulses.extend_from_slice(s);
    pulses.push(rt.inverse());
    Ok(PulseSequence::new(inner.target.clone(), pulses))
}

/// Successive π/3 corrections of the bare pulse, innermost first.
pub fn concat<T: Real>(gate: &Gate<T>, axes: &[Vec3<T>]) -> Result<PulseSequence<T>> {
    axes.iter().try_fold(naive(gate), |seq, a| pi3_correct(&seq, a))
}

/// The five-application sequence with π/5 and 3π/5 corrections about x.
///
/// Operator order Ū R_0(3π/5) Ū† R_t(−π/5) Ū R_0(−π/5) Ū† R_t(3π/5) Ū
/// with R_0(φ) = exp(i(φ/2)X·σ), preceded in time by R_0(−4π/5) so the ideal
/// product is U. The π/5 and 3π/5 pulses are on the perfect channel.
pub fn pi5_sequence<T: Real>(gate: &Gate<T>) -> Result<PulseSequence<T>> {
    pi5_sequence_on(gate, Channel::Perfect)
}

/// [`pi5_sequence`] with the four correction pulses on `channel`; the
/// alignment pulse stays perfect.
pub fn pi5_sequence_on<T: Real>(gate: &Gate<T>, channel: Channel) -> Result<PulseSequence<T>> {
    let u = gate.unitary()?;
    let fwd = Pulse::lab(gate.axis.clone(), gate.alpha, Role::Target, Channel::Target);
    let back = fwd.inverse();
    let r0 = |half: PiAngle| Pulse::new(FrameTriad::identity(), Vec3::unit_x(), half, Role::Correction, channel);
    let rt = |half: PiAngle| {
        let mut p = Pulse::new(FrameTriad::identity().transformed(&u), Vec3::unit_x(), half, Role::Correction, channel);
        p.transported = true;
        p
    };
    let align = Pulse { channel: Channel::Perfect, ..r0(PiAngle::new(-2, 5)) };
    let pulses = vec![
        align,
        fwd.clone(),
        rt(PiAngle::new(3, 10)),
        back.clone(),
        r0(PiAngle::new(-1, 10)),
        fwd.clone(),
        rt(PiAngle::new(-1, 10)),
        back,
        r0(PiAngle::new(3, 10)),
        fwd,
    ];
    Ok(PulseSequence::new(gate.clone(), pulses))
}

/// `(cos φ, sin φ)` with `cos φ = c`, φ ∈ [0, π].
fn phase<T: Real>(c: T) -> Result<(T, T)> {
    if c.abs() > T::one() {
        return Err(Error::NotBFamily(format!("cos φ = {} outside [-1, 1]", c.to_f64())));
    }
    let s = (T::one() - c.square()).sqrt();
    Ok((c, s))
}

/// `(cos 3φ, sin 3φ)`.
fn triple<T: Real>((c, s): &(T, T)) -> (T, T) {
    let (three, four) = (T::from_i64(3), T::from_i64(4));
    (
        four.clone() * c.powi(3) - three.clone() * c.clone(),
        three * s.clone() - four * s.powi(3),
    )
}

/// Gate axis `g` (in the xy-plane) and its in-plane normal `ẑ × g`.
fn plane_basis<T: Real>(gate: &Gate<T>) -> Result<(Vec3<T>, Vec3<T>)> {
    let g = gate.axis.to_unit()?;
    if g.z.abs() > T::from_f64(crate::su2::AXIS_TOLERANCE) {
        return Err(Error::NotBFamily("target axis is not in the xy-plane".into()));
    }
    let n = Vec3::unit_z().cross(&g);
    Ok((g, n))
}

fn b_pulse<T: Real>(basis: &(Vec3<T>, Vec3<T>), (c, s): &(T, T), half: PiAngle) -> Pulse<T> {
    let axis = basis.0.scale(c) + basis.1.scale(s);
    Pulse::lab(axis, half, Role::Correction, Channel::Target)
}

/// B2 (BB1): Ū followed by R_φ(π) R_3φ(2π) R_φ(π), cos φ = −θ/(4π) with θ
/// the rotation angle of the target. Phases are measured from the target
/// axis, which must lie in the xy-plane.
pub fn b2<T: Real>(gate: &Gate<T>) -> Result<PulseSequence<T>> {
    let basis = plane_basis(gate)?;
    let theta_over_pi = gate.alpha.abs().ratio::<T>() * T::from_i64(2);
    let p1 = phase(-(theta_over_pi / T::from_i64(4)))?;
    let p3 = triple(&p1);
    let mut seq = naive(gate);
    seq.pulses.extend([
        b_pulse(&basis, &p1, PiAngle::new(1, 2)),
        b_pulse(&basis, &p3, PiAngle::new(1, 1)),
        b_pulse(&basis, &p1, PiAngle::new(1, 2)),
    ]);
    Ok(seq)
}

/// B4: Ū followed by four blocks R_φ(π) R_3φ(2π) R_φ(π), the middle block
/// R_φ(−2π) R_−φ(−4π) R_φ(−2π), and four more blocks; cos φ = −θ/(24π).
pub fn b4<T: Real>(gate: &Gate<T>) -> Result<PulseSequence<T>> {
    let basis = plane_basis(gate)?;
    let theta_over_pi = gate.alpha.abs().ratio::<T>() * T::from_i64(2);
    let p = phase(-(theta_over_pi / T::from_i64(24)))?;
    let p3 = triple(&p);
    let p_neg = (p.0.clone(), -p.1.clone());
    let block = [
        b_pulse(&basis, &p, PiAngle::new(1, 2)),
        b_pulse(&basis, &p3, PiAngle::new(1, 1)),
        b_pulse(&basis, &p, PiAngle::new(1, 2)),
    ];
    let middle = [
        b_pulse(&basis, &p, PiAngle::new(-1, 1)),
        b_pulse(&basis, &p_neg, PiAngle::new(-2, 1)),
        b_pulse(&basis, &p, PiAngle::new(-1, 1)),
    ];
    let mut seq = naive(gate);
    for _ in 0..4 {
        seq.pulses.extend_from_slice(&block);
    }
    seq.pulses.extend_from_slice(&middle);
    for _ in 0..4 {
        seq.pulses.extend_from_slice(&block);
    }
    Ok(seq)
}

/// Splits the leading target pulse of a B-family sequence into two halves
/// around the correction block.
pub fn symmetrize<T: Real>(seq: &PulseSequence<T>) -> Result<PulseSequence<T>> {
    let (first, rest) = seq
        .pulses
        .split_first()
        .ok_or_else(|| Error::NotBFamily("empty sequence".into()))?;
    if first.role != Role::Target || first.channel != Channel::Target {
        return Err(Error::NotBFamily("first pulse is not the target pulse".into()));
    }
    if rest.is_empty() || rest.iter().any(|p| p.role != Role::Correction || p.channel != Channel::Target) {
        return Err(Error::NotBFamily("expected target pulse followed by a correction block".into()));
    }
    let half = Pulse { alpha: first.alpha.scale(1, 2), ..first.clone() };
    let mut pulses = Vec::with_capacity(seq.len() + 1);
    pulses.push(half.clone());
    pulses.extend_from_slice(rest);
    pulses.push(half);
    Ok(PulseSequence::new(seq.target.clone(), pulses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_models::{ErrorModel, Noise};
    use crate::su2::Unitary;

    fn assert_sound(seq: &PulseSequence<f64>) {
        let p = seq.ideal_product().unwrap();
        let u = seq.ideal_target().unwrap();
        let d = Unitary::phase_opt_trace_distance(&u, &p);
        assert!(d < 1e-13, "ideal product differs from target by {d}");
    }

    fn axes() -> [Vec3<f64>; 3] {
        [Vec3::unit_x(), Vec3::unit_y(), Vec3::unit_z()]
    }

    #[test]
    fn builders_are_sound() {
        let gates = [
            Gate::x_pi(),
            Gate::new(Vec3::unit_x(), PiAngle::new(1, 4)),
            Gate::new(Vec3::from_f64([0.6, 0.8, 0.0]), PiAngle::new(1, 3)),
        ];
        for g in &gates {
            assert_sound(&naive(g));
            assert_sound(&b2(g).unwrap());
            assert_sound(&b4(g).unwrap());
            assert_sound(&symmetrize(&b2(g).unwrap()).unwrap());
            assert_sound(&symmetrize(&b4(g).unwrap()).unwrap());
            assert_sound(&pi5_sequence(g).unwrap());
            for a in axes() {
                assert_sound(&pi3_correct(&naive(g), &a).unwrap());
            }
            assert_sound(&concat(g, &axes()).unwrap());
        }
        let generic = Gate::new(Vec3::from_f64([1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]), PiAngle::new(2, 9));
        assert_sound(&pi5_sequence(&generic).unwrap());
        assert_sound(&pi3_correct(&naive(&generic), &Vec3::from_f64([0.0, 0.6, 0.8])).unwrap());
    }

    #[test]
    fn pulse_counts() {
        let g = Gate::<f64>::x_pi();
        let mut seq = naive(&g);
        let (mut n, mut t) = (1usize, 1usize);
        for k in 1..=4 {
            seq = pi3_correct(&seq, &Vec3::unit_x()).unwrap();
            n = 3 * n + 4;
            t *= 3;
            assert_eq!(seq.len(), n, "level {k}");
            assert_eq!(seq.target_pulse_count(), t);
        }
        assert_eq!(b2(&g).unwrap().len(), 4);
        assert_eq!(b4(&g).unwrap().len(), 28);
        assert_eq!(symmetrize(&b2(&g).unwrap()).unwrap().len(), 5);
    }

    #[test]
    fn total_angles() {
        let g = Gate::<f64>::x_pi();
        assert_eq!(naive(&g).total_angle(), PiAngle::new(1, 1));
        assert_eq!(b2(&g).unwrap().total_angle(), PiAngle::new(5, 1));
        assert_eq!(symmetrize(&b2(&g).unwrap()).unwrap().total_angle(), PiAngle::new(5, 1));
        // 3 target pulses and 4 π/3 pulses
        assert_eq!(pi3_correct(&naive(&g), &Vec3::unit_y()).unwrap().total_angle(), PiAngle::new(13, 3));
    }

    #[test]
    fn b2_first_phase() {
        let g = Gate::<f64>::x_pi();
        let s = b2(&g).unwrap();
        assert!((s.pulses[1].axis.x + 0.25).abs() < 1e-15);
        assert!(s.pulses[1].axis.y > 0.0);
    }

    #[test]
    fn b_family_rejections() {
        let g = Gate::<f64>::new(Vec3::unit_z(), PiAngle::new(1, 2));
        assert!(matches!(b2(&g), Err(Error::NotBFamily(_))));
        let seq = pi3_correct(&naive(&Gate::<f64>::x_pi()), &Vec3::unit_y()).unwrap();
        assert!(matches!(symmetrize(&seq), Err(Error::NotBFamily(_))));
        assert!(matches!(symmetrize(&naive(&Gate::<f64>::x_pi())), Err(Error::NotBFamily(_))));
    }

    #[test]
    fn corrected_sequence_beats_naive() {
        let g = Gate::<f64>::x_pi();
        let noise = Noise::from(ErrorModel::LinearOverRotation { eps: 1.0 });
        let u = g.unitary().unwrap();
        let err = |s: &PulseSequence<f64>| Unitary::infidelity(&u, &s.evaluate(&noise, &0.01, false).unwrap());
        let bare = err(&naive(&g));
        assert!(err(&b2(&g).unwrap()) < bare * 1e-3);
        assert!(err(&pi3_correct(&naive(&g), &Vec3::unit_y()).unwrap()) < bare);
    }
}
