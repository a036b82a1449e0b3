use cpulse::analysis::{component_scan, fit_order, fit_power_law, pm_fidelity_error, table1, Column, Grid};
use cpulse::error_models::AngleFn;
use cpulse::order::{Axis, OrderTriple, Regime};
use cpulse::sequences::{concat, dsl, pi5_sequence_on};
use cpulse::{registry, Channel, ErrorModel, Ext, Gate, Noise, PiAngle, Real, Unitary, Vec3};

fn linear<T: Real>(eps: f64) -> Noise<T> {
    Noise::from(ErrorModel::LinearOverRotation { eps: T::from_f64(eps) })
}

fn slope(seq: &cpulse::PulseSequence<Ext>, noise: &Noise<Ext>, perfect_pi3: bool, column: Column) -> f64 {
    let scales: Vec<Ext> = Grid::new(1e-4, 1e-2, 6).unwrap().points();
    let scan = component_scan(seq, noise, &scales, perfect_pi3).unwrap();
    fit_order(&scan, column).unwrap().slope
}

#[test]
fn double_and_extended_evaluation_agree() {
    for name in registry::BUILTIN_NAMES {
        let sf = registry::build::<f64>(name, &Gate::x_pi()).unwrap();
        let se = registry::build::<Ext>(name, &Gate::x_pi()).unwrap();
        for eps in [0.1, 0.01, 0.001] {
            let uf = sf.evaluate(&linear(eps), &1.0, false).unwrap();
            let ue = se.evaluate(&linear(eps), &Ext::one(), false).unwrap();
            for (a, b) in [(uf.w, &ue.w), (uf.x, &ue.x), (uf.y, &ue.y), (uf.z, &ue.z)] {
                assert!((a - b.to_f64()).abs() < 1e-12, "{name} at {eps}: {a} vs {b}");
            }
            let inf_f = Unitary::infidelity(&sf.ideal_target().unwrap(), &uf);
            let inf_e = Unitary::infidelity(&se.ideal_target().unwrap(), &ue).to_f64();
            if inf_e > 1e-10 {
                assert!((inf_f - inf_e).abs() < 1e-4 * inf_e, "{name} at {eps}: {inf_f} vs {inf_e}");
            }
        }
    }
}

#[test]
fn reparsed_sequences_simulate_identically() {
    let gate = Gate::<f64>::new(Vec3::new(0.0, 0.6, 0.8), PiAngle::new(3, 4));
    let noise = Noise::split(
        ErrorModel::CovariantVector { delta: [AngleFn::constant(0.01), AngleFn::constant(-0.02), AngleFn::constant(0.005)] },
        ErrorModel::AxisDependentPi3 { delta: 0.003, delta_hat: 0.004 },
    );
    for name in ["naive", "pi3:X", "pi3:Y", "pi3:Z", "pi5", "concat:X,Y,Z"] {
        let seq = registry::build::<f64>(name, &gate).unwrap();
        let back = dsl::parse::<f64>(&dsl::serialize(&seq)).unwrap();
        let a = seq.evaluate(&noise, &1.0, false).unwrap();
        let b = back.evaluate(&noise, &1.0, false).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn table_agrees_across_precisions() {
    let tf = table1::<f64>().unwrap();
    let te = table1::<Ext>().unwrap();
    for (rf, re) in tf.cells.iter().zip(&te.cells) {
        for (f, e) in rf.iter().zip(re) {
            let e = e.to_f64();
            if e >= 1e-12 {
                assert_eq!(format!("{f:.1e}"), format!("{e:.1e}"), "{f} vs {e}");
            }
        }
    }
}

#[test]
fn fitted_orders_reach_calculus_predictions() {
    let third = Ext::from_ratio(1, 3);
    let two_thirds = Ext::from_ratio(2, 3);
    let gate = Gate::new(Vec3::new(third, two_thirds.clone(), two_thirds), PiAngle::new(2, 9));
    let noise = Noise::split(
        ErrorModel::CovariantVector {
            delta: [0.3, 0.5, 0.7].map(|c| AngleFn::constant(Ext::from_f64(c))),
        },
        ErrorModel::None,
    );
    for chain in [vec![Axis::X], vec![Axis::Z, Axis::X], vec![Axis::Y, Axis::Y]] {
        let predicted = Regime::Perfect.chain(OrderTriple::new(1, 1, 1), &chain);
        let axes: Vec<Vec3<Ext>> = chain
            .iter()
            .map(|a| match a {
                Axis::X => Vec3::unit_x(),
                Axis::Y => Vec3::unit_y(),
                Axis::Z => Vec3::unit_z(),
            })
            .collect();
        let seq = concat(&gate, &axes).unwrap();
        for (col, order) in [Column::Cx, Column::Cy, Column::Cz].into_iter().zip(predicted.to_array()) {
            if let cpulse::order::Order::Finite(k) = order {
                let s = slope(&seq, &noise, true, col);
                assert!(s >= k as f64 - 0.05, "{chain:?} {col:?}: slope {s} < {k}");
            }
        }
    }
}

#[test]
fn xy_correction_of_unsymmetrized_b2_beats_sixth_order() {
    let seq = registry::build::<Ext>("pi3xy∘b2", &Gate::x_pi()).unwrap();
    let s = slope(&seq, &linear(1.0), false, Column::Infidelity);
    assert!(s > 6.0 - 0.05, "slope {s}");
}

#[test]
fn pi5_with_over_rotated_corrections_is_fourth_order() {
    // |±> fidelity error: over-rotated correction pulses stop the
    // cancellation at second order in the components
    let third = Ext::from_ratio(1, 3);
    let two_thirds = Ext::from_ratio(2, 3);
    let gate = Gate::new(Vec3::new(third, two_thirds.clone(), two_thirds), PiAngle::new(2, 9));
    let seq = pi5_sequence_on(&gate, Channel::Pi3).unwrap();
    let ideal = seq.ideal_target().unwrap();
    let z = ErrorModel::CovariantVector { delta: [AngleFn::zero(), AngleFn::zero(), AngleFn::constant(Ext::one())] };
    for noise in [Noise::split(z, ErrorModel::LinearOverRotation { eps: Ext::one() }), linear(1.0)] {
        let pts: Vec<(f64, f64)> = Grid::new(1e-4, 1e-2, 6)
            .unwrap()
            .points::<Ext>()
            .iter()
            .map(|s| (s.to_f64(), pm_fidelity_error(&ideal, &seq.evaluate(&noise, s, false).unwrap()).to_f64()))
            .collect();
        let s = fit_power_law(&pts, Ext::noise_floor(2).to_f64()).unwrap().slope;
        assert!((s - 4.0).abs() < 0.05, "slope {s}");
    }
}
