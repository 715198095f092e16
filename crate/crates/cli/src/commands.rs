use std::io::Write;

use num_complex::Complex64;
use polyginibre::asymptotics::{exterior_mass_outside, exterior_moment, harmonic_moment};
use polyginibre::berezin::{blowup_profile, profile_l1_gap, BlowupFrame, CenterKind};
use polyginibre::dpp::Sampler;
use polyginibre::kernel::corr_kernel_fock;
use polyginibre::verify::{run_suite, VerifyOptions};
use polyginibre::{EnsembleParams, FeatureMap};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{sidecar, write_csv, write_json};
use crate::{
    BlowupArgs, EnsembleArgs, ExteriorArgs, Failure, Format, GridArgs, KernelArgs, SampleArgs, VerifyArgs,
    MAX_RESOLUTION,
};

pub const KERNEL_COLUMNS: [&str; 7] = ["z_re", "z_im", "kernel_re", "kernel_im", "limit_re", "limit_im", "gap"];
pub const PROFILE_COLUMNS: [&str; 5] = ["xi_re", "xi_im", "density", "limit_density", "gap"];
pub const EXTERIOR_COLUMNS: [&str; 8] = [
    "l",
    "moment_re",
    "moment_im",
    "harmonic_re",
    "harmonic_im",
    "target_re",
    "target_im",
    "gap",
];
pub const SAMPLE_COLUMNS: [&str; 2] = ["re", "im"];

fn ensemble(a: &EnsembleArgs) -> Result<EnsembleParams, Failure> {
    Ok(EnsembleParams::new(a.m, a.n, a.q)?)
}

/// Square grid `[-extent, extent]^2`, row-major with the real part varying fastest.
fn grid(g: &GridArgs) -> Result<Vec<Complex64>, Failure> {
    if !(g.extent.is_finite() && g.extent > 0.0) {
        return Err(Failure::Usage(format!("--extent must be positive, got {}", g.extent)));
    }
    if g.res == 0 || g.res > MAX_RESOLUTION {
        return Err(Failure::Usage(format!("--res must be in 1..={MAX_RESOLUTION}, got {}", g.res)));
    }
    let axis: Vec<f64> = if g.res == 1 {
        vec![0.0]
    } else {
        let h = 2.0 * g.extent / (g.res - 1) as f64;
        (0..g.res).map(|i| -g.extent + h * i as f64).collect()
    };
    Ok(axis
        .iter()
        .flat_map(|&y| axis.iter().map(move |&x| Complex64::new(x, y)))
        .collect())
}

#[derive(Serialize)]
struct KernelRow {
    z_re: f64,
    z_im: f64,
    kernel_re: f64,
    kernel_im: f64,
    limit_re: f64,
    limit_im: f64,
    gap: f64,
}

pub fn kernel(a: &KernelArgs) -> Result<(), Failure> {
    let p = ensemble(&a.ensemble)?;
    let zs = grid(&a.grid)?;
    let fm = FeatureMap::<f64>::new(&p)?;
    let rows: Vec<[f64; 7]> = zs
        .par_iter()
        .map(|&z| {
            let k = fm.kernel(z, a.w);
            let l = corr_kernel_fock(p.m, p.q, z, a.w);
            [z.re, z.im, k.re, k.im, l.re, l.im, (k - l).norm()]
        })
        .collect();
    match a.format {
        Format::Csv => write_csv(&a.out, KERNEL_COLUMNS, &rows)?,
        Format::Json => {
            let objs: Vec<KernelRow> = rows
                .iter()
                .map(|r| KernelRow {
                    z_re: r[0],
                    z_im: r[1],
                    kernel_re: r[2],
                    kernel_im: r[3],
                    limit_re: r[4],
                    limit_im: r[5],
                    gap: r[6],
                })
                .collect();
            write_json(&a.out, &objs)?
        }
    }
    Ok(())
}

#[derive(Serialize)]
pub struct BlowupSummary {
    pub m: f64,
    pub n: usize,
    pub q: usize,
    pub center_re: f64,
    pub center_im: f64,
    pub center_kind: CenterKind,
    pub extent: f64,
    pub res: usize,
    /// L1 gap over the disk `|xi| <= extent`, by polar quadrature.
    pub l1_gap: f64,
    /// Largest gap over the written grid.
    pub sup_gap: f64,
}

pub fn blowup(a: &BlowupArgs) -> Result<(), Failure> {
    let p = ensemble(&a.ensemble)?;
    let xis = grid(&a.grid)?;
    let frame = BlowupFrame::new(a.center);
    let samples = blowup_profile(&p, &frame, &xis)?;
    let rows: Vec<[f64; 5]> = samples
        .iter()
        .map(|s| [s.xi.re, s.xi.im, s.density, s.limit_density, s.gap])
        .collect();
    write_csv(&a.out, PROFILE_COLUMNS, &rows)?;
    let summary = BlowupSummary {
        m: p.m,
        n: p.n,
        q: p.q,
        center_re: a.center.re,
        center_im: a.center.im,
        center_kind: frame.classify(),
        extent: a.grid.extent,
        res: a.grid.res,
        l1_gap: profile_l1_gap(&p, &frame, a.grid.extent)?,
        sup_gap: samples.iter().map(|s| s.gap).fold(0.0, f64::max),
    };
    write_json(&sidecar(&a.out), &summary)?;
    Ok(())
}

#[derive(Serialize)]
struct MomentRow {
    l: usize,
    moment_re: f64,
    moment_im: f64,
    harmonic_re: f64,
    harmonic_im: f64,
    target_re: f64,
    target_im: f64,
    gap: f64,
}

#[derive(Serialize)]
struct ExteriorReport {
    m: f64,
    n: usize,
    q: usize,
    z_re: f64,
    z_im: f64,
    rho: f64,
    mass_outside: f64,
    moments: Vec<MomentRow>,
}

pub fn exterior(a: &ExteriorArgs) -> Result<(), Failure> {
    let p = ensemble(&a.ensemble)?;
    if !(a.rho.is_finite() && a.rho > 1.0) {
        return Err(Failure::Usage(format!("--rho must exceed 1, got {}", a.rho)));
    }
    let moments = (0..=a.lmax)
        .map(|l| {
            let mo = exterior_moment(&p, a.z, l)?;
            let h = harmonic_moment(a.z, l)?;
            let t = a.z.powi(-(l as i32));
            Ok(MomentRow {
                l,
                moment_re: mo.re,
                moment_im: mo.im,
                harmonic_re: h.re,
                harmonic_im: h.im,
                target_re: t.re,
                target_im: t.im,
                gap: (mo - t).norm(),
            })
        })
        .collect::<Result<Vec<_>, polyginibre::Error>>()?;
    match a.format {
        Format::Json => write_json(
            &a.out,
            &ExteriorReport {
                m: p.m,
                n: p.n,
                q: p.q,
                z_re: a.z.re,
                z_im: a.z.im,
                rho: a.rho,
                mass_outside: exterior_mass_outside(&p, a.z, a.rho)?,
                moments,
            },
        )?,
        Format::Csv => {
            let rows: Vec<[f64; 8]> = moments
                .iter()
                .map(|r| {
                    [
                        r.l as f64,
                        r.moment_re,
                        r.moment_im,
                        r.harmonic_re,
                        r.harmonic_im,
                        r.target_re,
                        r.target_im,
                        r.gap,
                    ]
                })
                .collect();
            write_csv(&a.out, EXTERIOR_COLUMNS, &rows)?
        }
    }
    Ok(())
}

#[derive(Serialize)]
pub struct SampleMeta {
    pub m: f64,
    pub n: usize,
    pub q: usize,
    pub seed: u64,
}

pub fn sample(a: &SampleArgs) -> Result<(), Failure> {
    let p = ensemble(&a.ensemble)?;
    let config = Sampler::new(&p)?.sample(a.seed)?;
    let rows: Vec<[f64; 2]> = config.points.iter().map(|z| [z.re, z.im]).collect();
    write_csv(&a.out, SAMPLE_COLUMNS, &rows)?;
    write_json(
        &sidecar(&a.out),
        &SampleMeta {
            m: p.m,
            n: p.n,
            q: p.q,
            seed: a.seed,
        },
    )?;
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let reports = run_suite(a.suite, VerifyOptions { fast: a.fast })?;
    match &a.out {
        Some(path) => write_json(path, &reports)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut stdout, &reports).map_err(std::io::Error::from)?;
            writeln!(stdout)?;
        }
    }
    for r in &reports {
        eprintln!(
            "{} {}: {:.3e} (tolerance {:.1e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.law,
            r.observed_error,
            r.tolerance
        );
    }
    match reports.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        n => Err(Failure::Verification(n)),
    }
}
