use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;

use super::output::{Cell, OutputDir, RunConfig};
use super::svg::{heatmap, render, Mark, Plot, Series};
use super::{ChainArgs, Command, Failure, GridSpec, RunArgs, UnfoldArgs};
use crate::chaostats::{analyze_spacings, linear_fit, nnsd_histogram, poisson_pdf, wigner_pdf};
use crate::dynamics::{bell_pair_state, evolve, quench_time, time_grid, EvolutionPlan};
use crate::entanglement::entropy_block;
use crate::spectra::{
    central_block_entropies, crossing_window, eigenstate_report, find_avoided_crossings, solve_spectrum,
    sweep_level_measures, sweep_levels, uniform_grid, ChainSector, SectorKind,
};
use crate::state::ChainParams;
use crate::{max_chain_len, Error};

type Outcome = Result<Vec<PathBuf>, Failure>;

pub(super) fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Spectrum { chain, sector, grid, run } => spectrum(chain, *sector, grid, run),
        Command::Nnsd {
            chain,
            sector,
            theta,
            unfold,
            bin_width,
            run,
        } => nnsd(chain, *sector, *theta, unfold, *bin_width, run),
        Command::Ks {
            chain,
            sector,
            grid,
            unfold,
            run,
        } => ks(chain, *sector, grid, unfold, run),
        Command::Eigent {
            chain,
            sector,
            theta,
            sl_curve,
            grid,
            central,
            run,
        } => eigent(chain, *sector, *theta, *sl_curve, grid.as_ref(), *central, run),
        Command::Avoided {
            chain,
            sector,
            grid,
            levels,
            refine_tol,
            window_ratio,
            max_half_width,
            window_points,
            run,
        } => avoided(
            chain,
            *sector,
            grid,
            levels,
            AvoidedSettings {
                refine_tol: *refine_tol,
                window_ratio: *window_ratio,
                max_half_width: *max_half_width,
                window_points: *window_points,
            },
            run,
        ),
        Command::Evolve {
            chain,
            theta,
            dt,
            tmax,
            pair,
            filler,
            threshold,
            window,
            run,
        } => evolve_cmd(
            chain,
            *theta,
            (*dt, *tmax),
            pair.as_deref(),
            *filler,
            (*threshold, *window),
            run,
        ),
    }
}

fn chain_params(chain: &ChainArgs, theta: f64) -> Result<ChainParams, Failure> {
    let max = max_chain_len();
    if chain.len > max {
        return Err(Error::Resource(format!(
            "L = {} exceeds the limit {max}; set {} to raise it",
            chain.len,
            crate::MAX_LEN_ENV
        ))
        .into());
    }
    Ok(ChainParams::new(chain.len, chain.coupling, chain.field, theta)?)
}

fn config(command: &str, chain: &ChainArgs, run: &RunArgs) -> RunConfig {
    RunConfig::new(command)
        .set("L", chain.len)
        .set("J", chain.coupling)
        .set("B", chain.field)
        .set("workers", run.workers)
        .set("seed", run.seed)
        .set("out", run.out.display())
}

fn unfold_config(cfg: RunConfig, unfold: &UnfoldArgs) -> RunConfig {
    cfg.set("fit_degree", unfold.fit_degree).set("trim", unfold.trim)
}

fn theta_label(theta: f64) -> String {
    format!("θ = {:.4}π", theta / PI)
}

fn spectrum(chain: &ChainArgs, sector: SectorKind, grid: &GridSpec, run: &RunArgs) -> Outcome {
    let base = chain_params(chain, grid.start)?;
    let cfg = config("spectrum", chain, run).set("sector", sector).set("theta_grid", grid);
    let track = sweep_levels(&ChainSector { params: base, sector }, &grid.points())?;
    let mut out = OutputDir::create(&run.out, cfg)?;
    let mut rows = Vec::new();
    for (t, levels) in track.theta_grid.iter().zip(&track.levels) {
        for (k, e) in levels.iter().enumerate() {
            rows.push(vec![Cell::F(*t), Cell::I(k), Cell::F(*e)]);
        }
    }
    out.csv("levels.csv", &["theta", "level_index", "energy"], &rows)?;
    let mut plot = Plot::new(format!("{sector} sector, L = {}", chain.len), "θ", "energy");
    for k in 0..track.num_levels() {
        let pts = track.theta_grid.iter().copied().zip(track.level(k)).collect();
        plot = plot.with(Series::new("", Mark::Line, pts));
    }
    out.svg("levels.svg", &render(&plot))?;
    Ok(out.into_written())
}

fn nnsd(
    chain: &ChainArgs,
    sector: SectorKind,
    theta: f64,
    unfold: &UnfoldArgs,
    bin_width: f64,
    run: &RunArgs,
) -> Outcome {
    let params = chain_params(chain, theta)?;
    let cfg = unfold_config(config("nnsd", chain, run).set("sector", sector).set("theta", theta), unfold)
        .set("bin_width", bin_width);
    let spec = solve_spectrum(&params, sector, false)?;
    let analysis = analyze_spacings(&spec.eigenvalues, unfold.fit_degree, unfold.trim)?;
    let mut out = OutputDir::create(&run.out, cfg)?;
    if let Some(n) = &analysis.notice {
        eprintln!("notice: {n}");
    }
    let (d_p, d_w, n_ks) = match &analysis.ks {
        Some(k) => (k.d_poisson, k.d_wigner, k.n),
        None => (f64::NAN, f64::NAN, 0),
    };
    let mean_spacing = analysis.unfolded.as_ref().map_or(f64::NAN, |u| u.mean_spacing());
    out.csv(
        "nnsd_summary.csv",
        &[
            "theta",
            "levels",
            "degeneracy_fraction",
            "mean_spacing",
            "ks_spacings",
            "d_poisson",
            "d_wigner",
            "notice",
        ],
        &[vec![
            Cell::F(theta),
            Cell::I(spec.len()),
            Cell::F(analysis.degeneracy_fraction),
            Cell::F(mean_spacing),
            Cell::I(n_ks),
            Cell::F(d_p),
            Cell::F(d_w),
            Cell::S(analysis.notice.clone().unwrap_or_default().replace(',', ";")),
        ]],
    )?;
    let mut plot = Plot::new(
        format!("spacing distribution, {}, L = {}", theta_label(theta), chain.len),
        "s",
        "P(s)",
    );
    let mut rows = Vec::new();
    if !analysis.ks_input.is_empty() {
        let h = nnsd_histogram(&analysis.ks_input, bin_width)?;
        for ((c, d), n) in h.centers.iter().zip(&h.densities).zip(&h.counts) {
            rows.push(vec![
                Cell::F(*c),
                Cell::F(*d),
                Cell::I(*n),
                Cell::F(wigner_pdf(*c)),
                Cell::F(poisson_pdf(*c)),
            ]);
        }
        let top = h.centers.last().map_or(4.0, |c| c.max(4.0));
        let fine = uniform_grid(0.0, top, 400);
        plot = plot
            .with(Series::new(
                "histogram",
                Mark::Bars(bin_width),
                h.centers.iter().copied().zip(h.densities.iter().copied()).collect(),
            ))
            .with(Series::new(
                "Wigner",
                Mark::Line,
                fine.iter().map(|&s| (s, wigner_pdf(s))).collect(),
            ))
            .with(Series::new(
                "Poisson",
                Mark::Line,
                fine.iter().map(|&s| (s, poisson_pdf(s))).collect(),
            ));
    }
    out.csv("nnsd.csv", &["bin_center", "density", "count", "wigner", "poisson"], &rows)?;
    out.svg("nnsd.svg", &render(&plot))?;
    Ok(out.into_written())
}

enum KsStatus {
    Ok(f64, f64, usize),
    Degenerate,
    UnfoldFailed(String),
}

fn ks(chain: &ChainArgs, sector: SectorKind, grid: &GridSpec, unfold: &UnfoldArgs, run: &RunArgs) -> Outcome {
    let base = chain_params(chain, grid.start)?;
    let cfg = unfold_config(
        config("ks", chain, run).set("sector", sector).set("theta_grid", grid),
        unfold,
    );
    let thetas = grid.points();
    let rows = thetas
        .par_iter()
        .map(|&t| {
            let spec = solve_spectrum(&base.with_theta(t), sector, true)?;
            let s_half = (0..spec.len())
                .into_par_iter()
                .map(|k| entropy_block(&spec.eigenstate(k)?, chain.len / 2))
                .collect::<crate::Result<Vec<_>>>()?;
            let mean_s = s_half.iter().sum::<f64>() / s_half.len() as f64;
            let status = match analyze_spacings(&spec.eigenvalues, unfold.fit_degree, unfold.trim) {
                Ok(a) => match a.ks {
                    Some(k) => (a.degeneracy_fraction, KsStatus::Ok(k.d_poisson, k.d_wigner, k.n)),
                    None => (a.degeneracy_fraction, KsStatus::Degenerate),
                },
                Err(Error::Unfolding(msg)) => (
                    crate::chaostats::degeneracy_fraction(&spec.eigenvalues),
                    KsStatus::UnfoldFailed(msg),
                ),
                Err(e) => return Err(e),
            };
            Ok((t, mean_s, status))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut out = OutputDir::create(&run.out, cfg)?;
    let mut table = Vec::new();
    let (mut dp, mut dw, mut ent) = (Vec::new(), Vec::new(), Vec::new());
    let mut failures = 0;
    for (t, mean_s, (frac, status)) in &rows {
        ent.push((*t, *mean_s));
        let (p, w, n, label) = match status {
            KsStatus::Ok(p, w, n) => {
                dp.push((*t, *p));
                dw.push((*t, *w));
                (*p, *w, *n, "ok")
            }
            KsStatus::Degenerate => {
                eprintln!("notice: θ = {t}: degenerate spectrum, KS skipped");
                (f64::NAN, f64::NAN, 0, "degenerate")
            }
            KsStatus::UnfoldFailed(msg) => {
                failures += 1;
                eprintln!("warning: θ = {t}: unfolding failed: {msg} (hint: lower --fit-degree or raise --trim)");
                (f64::NAN, f64::NAN, 0, "unfold_failed")
            }
        };
        table.push(vec![
            Cell::F(*t),
            Cell::F(*frac),
            Cell::I(n),
            Cell::F(p),
            Cell::F(w),
            Cell::F(*mean_s),
            Cell::S(label.into()),
        ]);
    }
    out.csv(
        "ks.csv",
        &[
            "theta",
            "degeneracy_fraction",
            "ks_spacings",
            "d_poisson",
            "d_wigner",
            "mean_s_half",
            "status",
        ],
        &table,
    )?;
    let plot = Plot::new(format!("KS distance, {sector} sector, L = {}", chain.len), "θ", "D")
        .with(Series::new("Poisson", Mark::Line, dp))
        .with(Series::new("Wigner", Mark::Line, dw));
    out.svg("ks.svg", &render(&plot))?;
    let plot = Plot::new(
        format!("mean half-chain entropy, L = {}", chain.len),
        "θ",
        "mean S_{L/2} (bits)",
    )
    .with(Series::new("", Mark::Line, ent));
    out.svg("ks_entropy.svg", &render(&plot))?;
    if failures == rows.len() && failures > 0 {
        return Err(Error::Unfolding("no angle of the sweep could be unfolded".into()).into());
    }
    Ok(out.into_written())
}

#[allow(clippy::too_many_arguments)]
fn eigent(
    chain: &ChainArgs,
    sector: SectorKind,
    theta: Option<f64>,
    sl_curve: bool,
    grid: Option<&GridSpec>,
    central: usize,
    run: &RunArgs,
) -> Outcome {
    let theta = match (theta, sl_curve) {
        (Some(t), _) => Some(t),
        (None, false) => Some(7.0 * PI / 16.0),
        (None, true) => None,
    };
    let sl_thetas: Vec<f64> = match grid {
        Some(g) => g.points(),
        None => vec![PI / 4.0, PI / 3.0, 7.0 * PI / 16.0, PI / 2.0],
    };
    let base = chain_params(chain, theta.unwrap_or(sl_thetas[0]))?;
    let mut cfg = config("eigent", chain, run).set("sector", sector);
    if let Some(t) = theta {
        cfg = cfg.set("theta", t);
    }
    if sl_curve {
        let list: Vec<String> = sl_thetas.iter().map(|t| t.to_string()).collect();
        cfg = cfg.set("sl_curve", true).set("sl_thetas", list.join(";")).set("central", central);
    }
    let mut out = OutputDir::create(&run.out, cfg)?;
    if let Some(t) = theta {
        let spec = solve_spectrum(&base.with_theta(t), sector, true)?;
        let report = eigenstate_report(&spec)?;
        let rows: Vec<Vec<Cell>> = report
            .iter()
            .map(|r| {
                vec![
                    Cell::I(r.index),
                    Cell::F(r.energy),
                    Cell::F(r.log_pr),
                    Cell::F(r.shannon),
                    Cell::F(r.q),
                    Cell::F(r.s_half.unwrap_or(f64::NAN)),
                ]
            })
            .collect();
        out.csv(
            "eigenstates.csv",
            &["index", "energy", "log_pr", "shannon", "q", "s_half"],
            &rows,
        )?;
        let pts = report
            .iter()
            .map(|r| (r.shannon, r.s_half.unwrap_or(f64::NAN)))
            .collect();
        let plot = Plot::new(
            format!("eigenstates, {}, L = {}", theta_label(t), chain.len),
            "Shannon entropy (nats)",
            "S_{L/2} (bits)",
        )
        .with(Series::new("", Mark::Dots, pts));
        out.svg("eigent.svg", &render(&plot))?;
    }
    if sl_curve {
        let curves = sl_thetas
            .iter()
            .map(|&t| {
                let spec = solve_spectrum(&base.with_theta(t), sector, true)?;
                let count = central.min(spec.len());
                Ok((t, count, central_block_entropies(&spec, count)?))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        let mut fits = Vec::new();
        let mut plot = Plot::new(
            format!("mean S_l over central eigenstates, L = {}", chain.len),
            "l",
            "S_l (bits)",
        );
        let l_max = chain.len / 2;
        for (t, count, mean) in &curves {
            for (i, s) in mean.iter().enumerate() {
                rows.push(vec![Cell::F(*t), Cell::I(i + 1), Cell::F(*s), Cell::I(*count)]);
            }
            if l_max >= 3 {
                let x: Vec<f64> = (2..=l_max).map(|l| l as f64).collect();
                let fit = linear_fit(&x, &mean[1..l_max])?;
                fits.push(vec![
                    Cell::F(*t),
                    Cell::I(2),
                    Cell::I(l_max),
                    Cell::F(fit.slope),
                    Cell::F(fit.intercept),
                    Cell::F(fit.r_squared),
                ]);
            }
            let pts = mean.iter().enumerate().map(|(i, s)| ((i + 1) as f64, *s)).collect();
            plot = plot.with(Series::new(theta_label(*t), Mark::Line, pts));
        }
        out.csv("sl_curve.csv", &["theta", "l", "mean_entropy", "states"], &rows)?;
        out.csv(
            "sl_fit.csv",
            &["theta", "l_min", "l_max", "slope", "intercept", "r_squared"],
            &fits,
        )?;
        out.svg("sl_curve.svg", &render(&plot))?;
    }
    Ok(out.into_written())
}

struct AvoidedSettings {
    refine_tol: f64,
    window_ratio: f64,
    max_half_width: f64,
    window_points: usize,
}

fn avoided(
    chain: &ChainArgs,
    sector: SectorKind,
    grid: &GridSpec,
    levels: &[usize],
    s: AvoidedSettings,
    run: &RunArgs,
) -> Outcome {
    let base = chain_params(chain, grid.start)?;
    let level_list: Vec<String> = levels.iter().map(|k| k.to_string()).collect();
    let cfg = config("avoided", chain, run)
        .set("sector", sector)
        .set("theta_grid", grid)
        .set("levels", level_list.join(";"))
        .set("refine_tol", s.refine_tol)
        .set("window_ratio", s.window_ratio)
        .set("max_half_width", s.max_half_width)
        .set("window_points", s.window_points);
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let dim = solve_spectrum(&base, sector, false)?.len();
    if let Some(&k) = sorted.iter().find(|&&k| k >= dim) {
        return Err(Failure::usage(format!("level {k} out of range ({dim} levels in the {sector} sector)")));
    }
    let pairs: Vec<usize> = sorted.windows(2).filter(|w| w[1] == w[0] + 1).map(|w| w[0]).collect();
    if pairs.is_empty() {
        return Err(Failure::usage("--levels must contain at least two adjacent indices"));
    }
    if s.window_points < 3 {
        return Err(Failure::usage("--window-points must be at least 3"));
    }
    let source = ChainSector { params: base, sector };
    let thetas = grid.points();
    let track = sweep_levels(&source, &thetas)?;
    let measures = sweep_level_measures(&base, &thetas, sector, &sorted)?;
    let mut out = OutputDir::create(&run.out, cfg)?;

    let mut rows = Vec::new();
    for (g, t) in thetas.iter().enumerate() {
        for (j, k) in sorted.iter().enumerate() {
            rows.push(vec![
                Cell::F(*t),
                Cell::I(*k),
                Cell::F(measures.energy[g][j]),
                Cell::F(measures.q[g][j]),
                Cell::F(measures.total_tangle[g][j]),
                Cell::F(measures.s_half[g][j]),
            ]);
        }
    }
    out.csv(
        "avoided_levels.csv",
        &["theta", "level_index", "energy", "q", "total_tangle", "s_half"],
        &rows,
    )?;
    for (name, title, field) in [
        ("avoided_energy.svg", "energy", &measures.energy),
        ("avoided_q.svg", "Q", &measures.q),
        ("avoided_tangle.svg", "total 2-tangle", &measures.total_tangle),
    ] {
        let mut plot = Plot::new(format!("{title} of tracked levels, L = {}", chain.len), "θ", title);
        for (j, k) in sorted.iter().enumerate() {
            let pts = thetas.iter().zip(field).map(|(t, row)| (*t, row[j])).collect();
            plot = plot.with(Series::new(format!("level {k}"), Mark::Line, pts));
        }
        out.svg(name, &render(&plot))?;
    }

    let mut crossings = Vec::new();
    let mut window_rows = Vec::new();
    let mut tangle_plot = Plot::new("pair-averaged total 2-tangle near avoided crossings", "θ − θ*", "tangle");
    let mut q_plot = Plot::new("pair-averaged Q near avoided crossings", "θ − θ*", "Q");
    for &lower in &pairs {
        let search = find_avoided_crossings(&source, &track, lower, s.refine_tol)?;
        for c in &search.degeneracies {
            crossings.push(vec![
                Cell::I(crossings.len()),
                Cell::S("degenerate".into()),
                Cell::I(lower),
                Cell::I(lower + 1),
                Cell::F(c.theta_star),
                Cell::F(c.min_gap),
                Cell::F(f64::NAN),
                Cell::F(f64::NAN),
            ]);
        }
        for c in &search.avoided {
            let id = crossings.len();
            let (lo, hi) = crossing_window(&source, c, s.window_ratio, s.max_half_width)?;
            crossings.push(vec![
                Cell::I(id),
                Cell::S("avoided".into()),
                Cell::I(lower),
                Cell::I(lower + 1),
                Cell::F(c.theta_star),
                Cell::F(c.min_gap),
                Cell::F(lo),
                Cell::F(hi),
            ]);
            let wgrid = uniform_grid(lo, hi, s.window_points);
            let m = sweep_level_measures(&base, &wgrid, sector, &[lower, lower + 1])?;
            let mut tau_pts = Vec::new();
            let mut q_pts = Vec::new();
            for (g, t) in wgrid.iter().enumerate() {
                let q = 0.5 * (m.q[g][0] + m.q[g][1]);
                let tau = 0.5 * (m.total_tangle[g][0] + m.total_tangle[g][1]);
                window_rows.push(vec![Cell::I(id), Cell::I(lower), Cell::F(*t), Cell::F(q), Cell::F(tau)]);
                tau_pts.push((t - c.theta_star, tau));
                q_pts.push((t - c.theta_star, q));
            }
            let label = format!("({lower},{}) at {:.4}", lower + 1, c.theta_star);
            tangle_plot = tangle_plot.with(Series::new(label.clone(), Mark::Line, tau_pts));
            q_plot = q_plot.with(Series::new(label, Mark::Line, q_pts));
        }
    }
    out.csv(
        "crossings.csv",
        &[
            "crossing",
            "kind",
            "lower",
            "upper",
            "theta_star",
            "min_gap",
            "window_lo",
            "window_hi",
        ],
        &crossings,
    )?;
    out.csv(
        "avoided_window.csv",
        &["crossing", "lower", "theta", "avg_q", "avg_tangle"],
        &window_rows,
    )?;
    out.svg("avoided_window_tangle.svg", &render(&tangle_plot))?;
    out.svg("avoided_window_q.svg", &render(&q_plot))?;
    Ok(out.into_written())
}

fn evolve_cmd(
    chain: &ChainArgs,
    theta: f64,
    (dt, tmax): (f64, f64),
    pair: Option<&[usize]>,
    filler: u8,
    (threshold, window): (f64, f64),
    run: &RunArgs,
) -> Outcome {
    let params = chain_params(chain, theta)?;
    let (i, j) = match pair {
        Some([i, j]) => (*i, *j),
        Some(_) => return Err(Failure::usage("--pair takes exactly two sites")),
        None => (1, 2),
    };
    let initial = bell_pair_state(chain.len, i, j, filler)?;
    let cfg = config("evolve", chain, run)
        .set("theta", theta)
        .set("dt", dt)
        .set("tmax", tmax)
        .set("pair", format!("{i};{j}"))
        .set("filler", filler)
        .set("threshold", threshold)
        .set("window", window);
    let plan = EvolutionPlan::new(params, initial, time_grid(dt, tmax)?)?;
    let series = evolve(&plan)?;
    let quench = quench_time(&series, threshold, window)?;
    let mut out = OutputDir::create(&run.out, cfg)?;

    let times = series.times();
    let mut nn_rows = Vec::new();
    let mut columns = Vec::new();
    for r in &series.records {
        let c = r.nn_concurrence.clone().unwrap_or_default();
        for (p, v) in c.iter().enumerate() {
            nn_rows.push(vec![Cell::F(r.time), Cell::I(p + 1), Cell::F(*v)]);
        }
        columns.push(c);
    }
    out.csv("nn_concurrence.csv", &["time", "pair_index", "concurrence"], &nn_rows)?;
    let q = series.q().unwrap_or_default();
    let avg = series.avg_nn_concurrence().unwrap_or_default();
    let tau = series.total_tangle().unwrap_or_default();
    let q_rows: Vec<Vec<Cell>> = times.iter().zip(&q).map(|(t, v)| vec![Cell::F(*t), Cell::F(*v)]).collect();
    out.csv("q.csv", &["time", "q"], &q_rows)?;
    let avg_rows: Vec<Vec<Cell>> = times
        .iter()
        .zip(avg.iter().zip(&tau))
        .map(|(t, (a, b))| vec![Cell::F(*t), Cell::F(*a), Cell::F(*b)])
        .collect();
    out.csv("avg_tangle.csv", &["time", "avg_nn_concurrence", "total_tangle"], &avg_rows)?;
    out.csv(
        "quench.csv",
        &["theta", "threshold", "window", "quench_time"],
        &[vec![
            Cell::F(theta),
            Cell::F(threshold),
            Cell::F(window),
            Cell::F(quench.unwrap_or(f64::INFINITY)),
        ]],
    )?;
    let pairs: Vec<f64> = (1..chain.len).map(|p| p as f64).collect();
    out.svg(
        "nn_concurrence.svg",
        &heatmap(
            &format!("nearest-neighbour concurrence, {}", theta_label(theta)),
            "t",
            "pair (n, n+1)",
            &times,
            &pairs,
            &columns,
        ),
    )?;
    let plot = Plot::new(format!("Q(t), {}", theta_label(theta)), "t", "Q")
        .with(Series::new("", Mark::Line, times.iter().copied().zip(q).collect()));
    out.svg("q.svg", &render(&plot))?;
    let plot = Plot::new(format!("two-body entanglement, {}", theta_label(theta)), "t", "")
        .with(Series::new(
            "average NN concurrence",
            Mark::Line,
            times.iter().copied().zip(avg).collect(),
        ))
        .with(Series::new(
            "total 2-tangle",
            Mark::Line,
            times.iter().copied().zip(tau).collect(),
        ));
    out.svg("avg_tangle.svg", &render(&plot))?;
    Ok(out.into_written())
}
