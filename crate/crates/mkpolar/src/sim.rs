//! Multi-threaded Monte Carlo drivers.
//!
//! Work is split along the same [`FRAME_BATCH`] boundaries the serial
//! engine uses, and every frame draws from streams keyed by
//! `(seed, frame_index)`, so the merged counters are identical for any
//! worker count — `--workers 8` produces byte-for-byte the output of
//! `--workers 1`.

use std::io::Write;
use std::thread;

use mkpolar_core::channel::{
    ChannelConfig, DecoderSelect, FerStatsRow, FrameSimulator, FRAME_BATCH,
};
use mkpolar_core::code::{KernelKind, PolarCodeSpec};
use mkpolar_core::construct::{table_from_counts, GenieSimulator, ReliabilityTable};

use crate::Result;

/// Splits `lo..hi` into up to `parts` contiguous chunks.
fn chunks(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    let total = hi - lo;
    let parts = (parts as u64).clamp(1, total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for w in 0..parts {
        let len = base + u64::from(w < extra);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Parallel version of [`mkpolar_core::channel::run_point`]: identical
/// statistics, batches fanned out over `workers` threads.
pub fn run_point_parallel(
    spec: &PolarCodeSpec,
    select: DecoderSelect,
    cfg: &ChannelConfig,
    max_frames: u64,
    min_frame_errors: u64,
    workers: usize,
) -> Result<FerStatsRow> {
    if workers <= 1 {
        return Ok(mkpolar_core::channel::run_point(
            spec,
            select,
            cfg,
            max_frames,
            min_frame_errors,
        )?);
    }
    if max_frames == 0 {
        return Err(mkpolar_core::Error::InvalidParameter("max_frames must be at least 1").into());
    }
    if spec.k() == 0 {
        return Err(mkpolar_core::Error::InvalidParameter("FER simulation needs K >= 1").into());
    }
    let mut sims: Vec<FrameSimulator> =
        (0..workers).map(|_| FrameSimulator::new(spec, select)).collect();
    let (mut frames, mut frame_errors, mut bit_errors) = (0u64, 0u64, 0u64);
    while frames < max_frames {
        let end = (frames + FRAME_BATCH).min(max_frames);
        let ranges = chunks(frames, end, workers);
        let partials: Vec<(u64, u64)> = thread::scope(|scope| {
            let handles: Vec<_> = sims
                .iter_mut()
                .zip(&ranges)
                .map(|(sim, &(lo, hi))| {
                    scope.spawn(move || {
                        let (mut fe, mut be) = (0u64, 0u64);
                        for f in lo..hi {
                            let outcome = sim.simulate(cfg, f);
                            be += outcome.bit_errors;
                            fe += u64::from(outcome.frame_error);
                        }
                        (fe, be)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for (fe, be) in partials {
            frame_errors += fe;
            bit_errors += be;
        }
        frames = end;
        if min_frame_errors > 0 && frame_errors >= min_frame_errors {
            break;
        }
    }
    Ok(FerStatsRow::from_counts(cfg.ebn0_db, spec.k(), frames, frame_errors, bit_errors))
}

/// Parallel FER sweep; rows match [`mkpolar_core::channel::run_fer`]
/// exactly.
pub fn run_fer_parallel(
    spec: &PolarCodeSpec,
    select: DecoderSelect,
    snr_points_db: &[f64],
    max_frames: u64,
    min_frame_errors: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<FerStatsRow>> {
    let rate = spec.k() as f64 / spec.n() as f64;
    snr_points_db
        .iter()
        .map(|&ebn0_db| {
            let cfg = ChannelConfig::awgn(ebn0_db, rate, seed)?;
            run_point_parallel(spec, select, &cfg, max_frames, min_frame_errors, workers)
        })
        .collect()
}

/// Parallel genie reliability estimation with σ from an explicit rate;
/// per-frame keying makes the merged table worker-count independent.
pub fn genie_reliability_parallel(
    kernels: &[KernelKind],
    design_snr_db: f64,
    rate: f64,
    frames: u64,
    seed: u64,
    workers: usize,
) -> Result<ReliabilityTable> {
    if workers <= 1 {
        return Ok(mkpolar_core::construct::genie_reliability_at_rate(
            kernels,
            design_snr_db,
            rate,
            frames,
            seed,
        )?);
    }
    if frames < 1 {
        return Err(mkpolar_core::Error::InvalidParameter("frames must be at least 1").into());
    }
    let ranges = chunks(0, frames, workers);
    let partials: Vec<Result<Vec<u64>>> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| {
                scope.spawn(move || -> Result<Vec<u64>> {
                    let mut sim = GenieSimulator::new(kernels, design_snr_db, rate)?;
                    let mut counts = vec![0u64; sim.n()];
                    for f in lo..hi {
                        sim.run_frame(seed, f, &mut counts);
                    }
                    Ok(counts)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total: Option<Vec<u64>> = None;
    for partial in partials {
        let partial = partial?;
        match &mut total {
            None => total = Some(partial),
            Some(acc) => {
                for (a, c) in acc.iter_mut().zip(partial) {
                    *a += c;
                }
            }
        }
    }
    Ok(table_from_counts(total.expect("at least one worker"), frames, design_snr_db))
}

/// Writes FER rows as CSV: `ebn0_db,frames,frame_errors,bit_errors,fer,ber`
/// with 7 significant digits on the floating-point fields.
pub fn write_fer_csv<W: Write>(mut w: W, rows: &[FerStatsRow]) -> std::io::Result<()> {
    writeln!(w, "ebn0_db,frames,frame_errors,bit_errors,fer,ber")?;
    for r in rows {
        writeln!(
            w,
            "{:.6},{},{},{},{:.6e},{:.6e}",
            r.ebn0_db, r.frames, r.frame_errors, r.bit_errors, r.fer, r.ber
        )?;
    }
    Ok(())
}

/// CSV rendering of FER rows as a string.
pub fn fer_csv_string(rows: &[FerStatsRow]) -> String {
    let mut buf = Vec::new();
    write_fer_csv(&mut buf, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}
