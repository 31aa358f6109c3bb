use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use latsym::degeneracy::degeneracy_report_with;
use latsym::fixtures;
use latsym::ges::{build_ges, cospectral_partition, Tolerances};
use latsym::graphdoc::{self, GraphDocument};
use latsym::multiplets::{extend_with_site, find_multiplets_with, verify_extension_with};
use latsym::par::Execution;
use latsym::reduction::{isospectral_reduce, nonlinear_spectrum, reduce_via_charpoly, NonlinearSpectrum, ReducedMatrix};
use latsym::symmetry::{
    global_automorphisms_with, latent_group_data, latent_permutation_group_with, local_power_commute,
    symbolic_commute, walk_profile, SearchOptions,
};
use latsym::{Error, Hamiltonian, Result, SiteSet};

use crate::report::Report;
use crate::{exit_code, verify, Command, Format, Options};

/// A loaded graph plus where it came from.
pub struct Loaded {
    pub doc: GraphDocument,
    pub source: Value,
}

impl Loaded {
    pub fn h(&self) -> &Hamiltonian {
        &self.doc.hamiltonian
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_path(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let doc = graphdoc::parse(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(Loaded {
        source: json!({ "file": path.display().to_string(), "sha256": digest(text.as_bytes()), "sites": doc.hamiltonian.size() }),
        doc,
    })
}

fn load_fixture(name: &str) -> Result<Loaded> {
    let doc = GraphDocument::new(fixtures::by_name(name)?).with_meta("fixture", name);
    let text = graphdoc::render(&doc);
    Ok(Loaded {
        source: json!({ "fixture": name, "sha256": digest(text.as_bytes()), "sites": doc.hamiltonian.size() }),
        doc,
    })
}

fn load(opts: &Options) -> Result<Loaded> {
    match (&opts.input, &opts.fixture) {
        (Some(p), None) => load_path(p),
        (None, Some(f)) => load_fixture(f),
        (Some(_), Some(_)) => Err(Error::Input("give either --input or --fixture, not both".into())),
        (None, None) => Err(Error::Input("missing --input FILE (or --fixture NAME)".into())),
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad {what} entry {t:?}"))))
        .collect()
}

pub fn sites(opts: &Options, h: &Hamiltonian) -> Result<Option<SiteSet>> {
    opts.sites
        .as_deref()
        .map(|s| SiteSet::from_one_based(&parse_list(s, "site")?, h.size()))
        .transpose()
}

fn require_sites(opts: &Options, h: &Hamiltonian) -> Result<SiteSet> {
    sites(opts, h)?.ok_or_else(|| Error::Input("missing --sites, e.g. --sites 1,2,3".into()))
}

fn pair(opts: &Options, h: &Hamiltonian) -> Result<(usize, usize)> {
    let text = opts.pair.as_deref().ok_or_else(|| Error::Input("missing --pair, e.g. --pair 1,2".into()))?;
    let p = parse_list(text, "pair")?;
    if p.len() != 2 || p[0] == p[1] {
        return Err(Error::Input(format!("--pair needs two distinct sites, got {text:?}")));
    }
    for &s in &p {
        if s == 0 || s > h.size() {
            return Err(Error::Input(format!("site {s} out of range 1..={}", h.size())));
        }
    }
    Ok((p[0] - 1, p[1] - 1))
}

pub fn exec(opts: &Options) -> Execution {
    if opts.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn tolerances(opts: &Options) -> Tolerances {
    Tolerances {
        cluster: opts.tol_cluster,
        basis: opts.tol_basis,
        ges: opts.tol_ges,
        commute: opts.tol_commute,
    }
}

pub fn search(opts: &Options) -> SearchOptions {
    SearchOptions {
        exec: exec(opts),
        max_latent_sites: opts.max_latent_sites,
        max_global_sites: opts.max_global_sites,
        max_group_order: opts.max_group_order,
    }
}

fn parameters(opts: &Options, s: Option<&SiteSet>) -> Value {
    let so = search(opts);
    json!({
        "sites": s.map(|s| s.one_based()),
        "pair": opts.pair,
        "seed": opts.seed,
        "tolerances": tolerances(opts).to_data(),
        "search": {
            "max_latent_sites": so.max_latent_sites,
            "max_global_sites": so.max_global_sites,
            "max_group_order": so.max_group_order,
        },
        "max_multiplet_size": opts.max_size,
        "digits": opts.digits,
        "execution": if opts.sequential { "sequential" } else { "parallel" },
    })
}

pub fn spectrum_data(ns: &NonlinearSpectrum) -> Value {
    json!({
        "cleared": ns.cleared.to_string(),
        "factors": ns.structure.factors.iter().map(|(f, m)| json!({ "factor": f.to_string(), "multiplicity": m })).collect::<Vec<_>>(),
        "roots": ns.roots.iter().map(|(z, m)| json!({ "re": z.re, "im": z.im, "multiplicity": m })).collect::<Vec<_>>(),
        "shared_factor": ns.shared_factor.to_string(),
        "coincides_with_spectrum": ns.coincides_with_spectrum,
    })
}

/// Reduces over a seeded reordering `π(S)` and checks it is the
/// correspondingly permuted `R_S`.
pub fn relabel_check(h: &Hamiltonian, s: &SiteSet, r: &ReducedMatrix, seed: u64) -> Result<(Vec<usize>, bool)> {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.shuffle(&mut fixtures::rng(seed));
    let r2 = isospectral_reduce(h, &s.reordered(&order))?;
    let n = s.len();
    let holds = (0..n).all(|i| (0..n).all(|j| r2.entries()[(i, j)] == r.entries()[(order[i], order[j])]));
    Ok((order.iter().map(|i| i + 1).collect(), holds))
}

fn reduce(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let s = require_sites(opts, h)?;
    let mut rep = Report::new("reduce", input.source.clone(), parameters(opts, Some(&s)));
    let r = rep.timed("reduce", || isospectral_reduce(h, &s))?;
    let alt = rep.timed("reduce_via_charpoly", || reduce_via_charpoly(h, &s))?;
    let ns = rep.timed("nonlinear_spectrum", || nonlinear_spectrum(&r, h))?;
    let (order, w_pi) = rep.timed("relabel_check", || relabel_check(h, &s, &r, opts.seed))?;
    rep.display = Some(match opts.format {
        Format::Latex => r.render_latex(),
        _ => format!("R_S(λ) over S = {s}\n{}\npoles: {}", r.render_text(), r.poles()),
    });
    rep.result("reduction", r.to_data());
    rep.result("nonlinear_spectrum", spectrum_data(&ns));
    rep.certify("two_reduction_paths_agree", r == alt);
    rep.certify("denominators_divide_poles", r.denominators_divide_poles());
    rep.certify("schur_identity", ns.schur_identity);
    rep.certify("nonlinear_spectrum_divides_char_h", ns.divides_char_h);
    rep.certify("relabelling_covariant", w_pi);
    rep.certificate("relabelling_order", json!(order));
    Ok(rep)
}

fn latent(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let s = require_sites(opts, h)?;
    let so = search(opts);
    let mut rep = Report::new("latent", input.source.clone(), parameters(opts, Some(&s)));
    let group = rep.timed("latent_search", || latent_permutation_group_with(h, &s, &so))?;
    let profile = walk_profile(h, &s)?;
    let r = isospectral_reduce(h, &s)?;
    let mut eq = true;
    for g in group.generators() {
        let m = g.matrix();
        eq &= local_power_commute(h, &s, &m)? && symbolic_commute(&r, &m)?;
    }
    rep.display = Some(format!("latent group over S = {s}: order {}, {}", group.order(), group.tag()));
    rep.result("latent_group", latent_group_data(&group, &s, profile.max_power()));
    let auts = rep.timed("automorphism_search", || global_automorphisms_with(h, &so));
    rep.result(
        "automorphisms",
        match auts {
            Ok(a) => a.to_data(),
            Err(e @ Error::Bound(_)) => json!({ "skipped": e.to_string() }),
            Err(e) => return Err(e),
        },
    );
    rep.certify("generators_commute_with_powers_and_reduction", eq);
    Ok(rep)
}

fn degeneracy(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let s = require_sites(opts, h)?;
    let mut rep = Report::new("degeneracy", input.source.clone(), parameters(opts, Some(&s)));
    let report = rep.timed("degeneracy", || degeneracy_report_with(h, &s, &search(opts)))?;
    rep.display = Some(report.render_text());
    rep.result("degeneracy", report.to_data());
    rep.certify("bounds_hold", report.passed());
    Ok(rep)
}

fn ges(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let (u, v) = pair(opts, h)?;
    let tol = tolerances(opts);
    let mut rep = Report::new("ges", input.source.clone(), parameters(opts, None));
    let partition = cospectral_partition(h);
    let q = rep.timed("ges", || build_ges(h, u, v, &tol))?;
    rep.display = Some(format!("Q^({},{})\n{}", u + 1, v + 1, q.render_text(opts.digits)));
    rep.result("ges", q.to_data(opts.digits));
    rep.result("cospectral_classes", partition.to_data());
    rep.certify("exactly_cospectral", partition.cospectral(u, v));
    rep.certify("residuals_within_tolerance", {
        let res = &q.residuals;
        [res.involution, res.symmetry, res.commutator, res.exchange].iter().all(|&x| x <= tol.ges)
    });
    Ok(rep)
}

fn multiplets(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let s = require_sites(opts, h)?;
    let mut rep = Report::new("multiplets", input.source.clone(), parameters(opts, Some(&s)));
    let found = rep.timed("multiplets", || find_multiplets_with(h, &s, opts.max_size, exec(opts)))?;
    let lines: Vec<String> = found
        .iter()
        .map(|m| {
            let sites: Vec<String> = m.sites.iter().map(|x| (x + 1).to_string()).collect();
            format!("{{{}}}{}", sites.join(","), if m.minimal { "" } else { " (not minimal)" })
        })
        .collect();
    rep.display = Some(format!("{} multiplet(s) of S = {s}\n{}", found.len(), lines.join("\n")));
    rep.result("multiplets", json!(found.iter().map(|m| m.to_data()).collect::<Vec<_>>()));
    rep.certificate("walk_sums_checked_up_to_power", json!(h.size() - 1));
    Ok(rep)
}

fn extend(opts: &Options, input: &Loaded) -> Result<Report> {
    let h = input.h();
    let s = require_sites(opts, h)?;
    let plan_path = opts.plan.as_ref().ok_or_else(|| Error::Input("missing --plan FILE".into()))?;
    let text = fs::read_to_string(plan_path).map_err(|e| Error::Input(format!("{}: {e}", plan_path.display())))?;
    let plan = graphdoc::parse_plan(&text)?;
    let mut rep = Report::new("extend", input.source.clone(), parameters(opts, Some(&s)));
    let h2 = extend_with_site(h, &s, &plan)?;
    let check = rep.timed("verify_extension", || verify_extension_with(h, &h2, &s, &search(opts)))?;
    let doc = GraphDocument::new(h2).with_meta("extended_from", input.source["sha256"].as_str().unwrap_or(""));
    let rendered = graphdoc::render(&doc);
    if let Some(out) = &opts.output {
        fs::write(out, &rendered).map_err(|e| Error::Input(format!("{}: {e}", out.display())))?;
        rep.result("written", json!(out.display().to_string()));
    }
    rep.display = Some(format!(
        "added site {}; R_S shifts by a(λ)·J with a(λ) = {}",
        doc.hamiltonian.size(),
        check.a.as_ref().map_or("(not a multiple of J)".into(), |a| a.render_integer("λ"))
    ));
    rep.result("plan", json!(graphdoc::render_plan(&plan)));
    rep.result("extension", check.to_data());
    rep.result("extended_sha256", json!(digest(rendered.as_bytes())));
    rep.certify("shift_is_multiple_of_j", check.a.is_some());
    rep.certify("latent_group_preserved", check.group_preserved);
    Ok(rep)
}

fn analyse(cmd: Command, opts: &Options, input: &Loaded) -> Result<Report> {
    if opts.format == Format::Latex && cmd != Command::Reduce {
        return Err(Error::Input("latex output is only available for `reduce`".into()));
    }
    match cmd {
        Command::Reduce => reduce(opts, input),
        Command::Latent => latent(opts, input),
        Command::Degeneracy => degeneracy(opts, input),
        Command::Ges => ges(opts, input),
        Command::Multiplets => multiplets(opts, input),
        Command::Extend => extend(opts, input),
        Command::Verify => verify::battery(opts, input),
        Command::Batch | Command::Fixture => Err(Error::Input(format!("{cmd:?} cannot run as an analysis"))),
    }
}

fn emit(text: &str, dest: Option<&PathBuf>) -> Result<()> {
    match dest {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rendered(rep: &Report, opts: &Options) -> String {
    match opts.format {
        Format::Data => format!("{:#}\n", rep.to_data(!opts.no_timings)),
        Format::Text => rep.render_text(!opts.no_timings),
        Format::Latex => format!("{}\n", rep.display.as_deref().unwrap_or_default()),
    }
}

/// Runs one command; `Ok` carries 0, or 1 when a certificate failed.
pub fn run(cmd: Command, opts: &Options) -> Result<u8> {
    match cmd {
        Command::Fixture => fixture(opts),
        Command::Batch => batch(opts),
        _ => {
            let input = load(opts)?;
            let rep = analyse(cmd, opts, &input)?;
            // `extend` writes the graph to --output, so its report goes to stdout
            let dest = if cmd == Command::Extend { None } else { opts.output.as_ref() };
            emit(&rendered(&rep, opts), dest)?;
            Ok(if rep.passed { 0 } else { 1 })
        }
    }
}

fn fixture(opts: &Options) -> Result<u8> {
    let name = opts
        .name
        .as_deref()
        .or(opts.fixture.as_deref())
        .ok_or_else(|| Error::Input("missing --name, e.g. --name ring:6".into()))?;
    let doc = load_fixture(name)?.doc;
    emit(&graphdoc::render(&doc), opts.output.as_ref())?;
    Ok(0)
}

fn batch(opts: &Options) -> Result<u8> {
    let dir = opts.dir.as_ref().ok_or_else(|| Error::Input("missing --dir DIR".into()))?;
    let analysis = opts.analysis.ok_or_else(|| Error::Input("missing --analysis COMMAND".into()))?;
    if matches!(analysis, Command::Batch | Command::Fixture | Command::Extend) {
        return Err(Error::Input(format!("batch cannot run {analysis:?}")));
    }
    let out_dir = opts.output.as_ref().ok_or_else(|| Error::Input("missing --output DIR for batch reports".into()))?;
    fs::create_dir_all(out_dir).map_err(|e| Error::Input(format!("{}: {e}", out_dir.display())))?;
    let mut inputs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    inputs.sort();
    let one = |path: &PathBuf| -> (String, u8, String) {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let outcome = load_path(path).and_then(|input| analyse(analysis, opts, &input));
        let (code, body) = match outcome {
            Ok(rep) => (if rep.passed { 0 } else { 1 }, format!("{:#}\n", rep.to_data(!opts.no_timings))),
            Err(e) => (
                exit_code(&e),
                format!("{:#}\n", json!({ "command": format!("{analysis:?}").to_lowercase(), "input": path.display().to_string(), "error": e.to_string(), "exit_code": exit_code(&e) })),
            ),
        };
        let target = out_dir.join(format!("{stem}.json"));
        if let Err(e) = fs::write(&target, body) {
            return (stem, 2, e.to_string());
        }
        (stem, code, target.display().to_string())
    };
    let results: Vec<(String, u8, String)> = per_input(&inputs, one);
    let mut worst = 0;
    for (stem, code, target) in &results {
        println!("{stem}\texit {code}\t{target}");
        worst = worst.max(*code);
    }
    println!("{} input(s), {} ok", results.len(), results.iter().filter(|r| r.1 == 0).count());
    Ok(worst)
}

/// Independent inputs go to the worker pool; each writes only its own file.
fn per_input<F>(inputs: &[PathBuf], f: F) -> Vec<(String, u8, String)>
where
    F: Fn(&PathBuf) -> (String, u8, String) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        inputs.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        inputs.iter().map(f).collect()
    }
}
