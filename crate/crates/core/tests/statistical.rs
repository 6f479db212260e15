//! Statistical invariants that need real Monte Carlo volume: exact-mode
//! decoding never measures worse than min-sum beyond noise, and genie
//! construction beats random frozen sets decisively.

use mkpolar_core::channel::{run_fer, DecoderSelect, FerStatsRow};
use mkpolar_core::code::{KernelKind, PolarCodeSpec};
use mkpolar_core::construct::{genie_reliability_at_rate, select_frozen};

fn p48_kernels() -> Vec<KernelKind> {
    [3, 2, 2, 2, 2]
        .iter()
        .map(|&d| KernelKind::from_dimension(d).unwrap())
        .collect()
}

fn genie_p48() -> PolarCodeSpec {
    let kernels = p48_kernels();
    let table = genie_reliability_at_rate(&kernels, 2.0, 0.5, 50_000, 1).unwrap();
    let frozen = select_frozen(&table, 24).unwrap();
    PolarCodeSpec::new(kernels, 24, frozen).unwrap()
}

fn standard_error(row: &FerStatsRow) -> f64 {
    (row.fer * (1.0 - row.fer) / row.frames as f64).sqrt()
}

#[test]
fn exact_mode_is_not_worse_than_minsum() {
    let spec = genie_p48();
    let points = [2.0, 3.0];
    let exact = run_fer(&spec, DecoderSelect::Exact, &points, 20_000, 0, 33).unwrap();
    let minsum = run_fer(&spec, DecoderSelect::MinSum, &points, 20_000, 0, 33).unwrap();
    for (e, m) in exact.iter().zip(&minsum) {
        let slack = 2.0 * (standard_error(e).powi(2) + standard_error(m).powi(2)).sqrt();
        assert!(
            e.fer <= m.fer + slack,
            "exact fer {} vs minsum fer {} (slack {slack}) at {} dB",
            e.fer,
            m.fer,
            e.ebn0_db
        );
    }
}

#[test]
fn genie_frozen_set_beats_a_random_one_at_design_snr() {
    let spec = genie_p48();

    // seeded random frozen set of the same size
    let mut indices: Vec<usize> = (0..48).collect();
    let mut state = 0x5eed_cafe_u64;
    for i in (1..indices.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        indices.swap(i, (state >> 33) as usize % (i + 1));
    }
    indices.truncate(24);
    let random_spec = PolarCodeSpec::new(p48_kernels(), 24, indices).unwrap();

    let frames = 20_000;
    let genie_row = &run_fer(&spec, DecoderSelect::MinSum, &[2.0], frames, 0, 5).unwrap()[0];
    let random_row =
        &run_fer(&random_spec, DecoderSelect::MinSum, &[2.0], frames, 0, 5).unwrap()[0];

    let genie_hi = genie_row.fer + 1.96 * standard_error(genie_row);
    let random_lo = random_row.fer - 1.96 * standard_error(random_row);
    assert!(
        genie_hi < random_lo,
        "genie CI [..{genie_hi}] must sit below random CI [{random_lo}..] \
         (genie fer {}, random fer {})",
        genie_row.fer,
        random_row.fer
    );
}
