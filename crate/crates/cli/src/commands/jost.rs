use rayon::prelude::*;
use resonant_core::jost::{cross_section, jost_pair, pole_search, KRegion, RadialProblem};
use resonant_core::Complex64;

use super::{linspace, Ctx};
use crate::config::JostConfig;
use crate::failure::{config_error, core};
use crate::output::{cx, Table};

pub fn problem(j: &JostConfig, units: &resonant_core::Units) -> anyhow::Result<RadialProblem> {
    let bad = |e: resonant_core::Error| config_error(format!("[jost] {e}"));
    let mut p = RadialProblem::new(j.l, j.potential(), *units).map_err(bad)?;
    if let Some(r) = j.r_max {
        p.r_max = r;
    }
    if let Some(h) = j.step {
        p.step = h;
    }
    p.validate().map_err(bad)?;
    Ok(p)
}

fn describe(j: &JostConfig) -> String {
    let pot = match j.potential {
        crate::config::PotentialFamily::Free => "free".to_string(),
        crate::config::PotentialFamily::Exponential => {
            format!("V = {} exp(-r/{})", j.strength, j.decay_length)
        }
        crate::config::PotentialFamily::SquareWell => format!("V = -{} for r < {}", j.depth, j.radius),
    };
    format!("{pot}, l = {}", j.l)
}

pub fn smatrix(ctx: &mut Ctx) -> anyhow::Result<()> {
    let j = &ctx.cfg.jost;
    if !(j.k_min > 0.0 && j.k_max > j.k_min) || j.k_points < 2 {
        return Err(config_error("[jost] need 0 < k_min < k_max and k_points >= 2"));
    }
    let p = problem(j, &ctx.units)?;
    let ks = linspace(j.k_min, j.k_max, j.k_points);
    let pairs = ks
        .par_iter()
        .map(|&k| jost_pair(&p, Complex64::new(k, 0.0)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(core)?;
    let sign = if p.l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut t = Table::new("smatrix", &["k", "ReS", "ImS", "absS", "delta", "Ref_plus", "Imf_plus"])
        .comment(describe(j))
        .comment("S = (-1)^l f_-(k) / f_+(k); delta = arg(S) / 2 in (-pi/2, pi/2]");
    for pair in &pairs {
        let s = pair.f_minus / pair.f_plus * sign;
        let [sr, si] = cx(s);
        let [fr, fi] = cx(pair.f_plus);
        t.push(vec![pair.k.re.into(), sr, si, s.norm().into(), (0.5 * s.arg()).into(), fr, fi]);
    }
    ctx.write(t)
}

pub fn poles(ctx: &mut Ctx) -> anyhow::Result<()> {
    let j = &ctx.cfg.jost;
    let p = problem(j, &ctx.units)?;
    let region = KRegion {
        re: (j.re_range[0], j.re_range[1]),
        im: (j.im_range[0], j.im_range[1]),
        n_re: j.n_re,
        n_im: j.n_im,
    };
    let found = pole_search(&p, &region).map_err(core)?;
    let mut t = Table::new("poles", &["kind", "ReK", "ImK", "ReE", "ImE", "Gamma", "residual"])
        .comment(describe(j))
        .comment(format!("{} seeds did not converge", found.unconverged_seeds));
    for s in &found.states {
        let [kr, ki] = cx(s.k());
        let [er, ei] = cx(s.e());
        t.push(vec![s.kind.as_str().into(), kr, ki, er, ei, s.gamma().into(), s.residual.into()]);
    }
    ctx.out.note("poles", found.states.len());
    ctx.write(t)
}

pub fn sigma(ctx: &mut Ctx) -> anyhow::Result<()> {
    let j = &ctx.cfg.jost;
    if j.theta_points < 2 {
        return Err(config_error("[jost] theta_points must be at least 2"));
    }
    let p = problem(j, &ctx.units)?;
    let thetas = linspace(0.0, std::f64::consts::PI, j.theta_points);
    let cs = cross_section(&p, j.l_max, j.k, &thetas).map_err(core)?;
    let mut t = Table::new("sigma", &["theta", "dsigma"])
        .comment(describe(j))
        .comment(format!("k = {}, l_max = {}, total = {}, truncation = {:e}", cs.k, j.l_max, cs.total, cs.truncation));
    for &(th, v) in &cs.differential {
        t.push(vec![th.into(), v.into()]);
    }
    ctx.write(t)?;
    let mut s = Table::new("partial_waves", &["l", "ReS", "ImS"]);
    for (l, z) in cs.s_matrix.iter().enumerate() {
        let [r, i] = cx(*z);
        s.push(vec![l.into(), r, i]);
    }
    ctx.out.note("total", cs.total);
    ctx.write(s)
}
