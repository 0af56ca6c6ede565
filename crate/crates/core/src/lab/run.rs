use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::Instant;

use serde_json::json;

use super::catalog::{CatalogEntry, MapCatalog, Tag};
use super::config::{ConfigError, ExperimentConfig, ExperimentKind};
use super::format::sig;
use super::report::{CapturedError, ErrorClass, MapRecord, Measurement, Report};
use crate::charset::{build_characteristic_set, CharacteristicSet};
use crate::fibercount::{geometric_degree_report, DegreeReport, DEFAULT_TOL, DEFAULT_TRIALS};
use crate::polycore::json::MapJson;
use crate::polycore::PlanarPolyMap;
use crate::tracts::{asymptotic_union_check, dual_map, tract_search_report, TractJson};
use crate::volmetric::{
    combined_stderr, contraction_ratio, multiplicity_volume, rho_d, SamplingDomain, VolumeEstimate,
};

/// Tolerance band, in combined standard errors, for every statistical assertion.
pub const SIGMAS: f64 = 3.0;
/// Admissible range of each dilation ratio for automorphisms.
pub const RATIO_BAND: (f64, f64) = (0.9, 1.1);
/// Default number of generated isometry triples and degree pairs.
const DEFAULT_TRIPLES: usize = 10;
const DEFAULT_PAIRS: usize = 20;

/// Runs `f` on a dedicated pool of `workers` threads (or the global pool).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, ConfigError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(ConfigError("workers must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, catalog: &MapCatalog) -> Result<Report, ConfigError> {
    run_experiment_with_workers(cfg, catalog, None)
}

/// Validates the config and runs it. Input problems are returned as errors;
/// everything that goes wrong afterwards is recorded in the report.
pub fn run_experiment_with_workers(
    cfg: &ExperimentConfig,
    catalog: &MapCatalog,
    workers: Option<usize>,
) -> Result<Report, ConfigError> {
    cfg.validate(catalog)?;
    let domain = cfg.domain.as_ref().map(|d| d.build()).transpose()?;
    let start = Instant::now();
    let (mut report, threads) = with_workers(workers, || {
        let mut r = Runner { cfg, catalog, domain, report: Report::new(cfg) };
        r.run();
        (r.report, rayon::current_num_threads())
    })?;
    report.finish();
    report.timing.wall_time_ms = start.elapsed().as_millis() as u64;
    report.timing.workers = threads;
    Ok(report)
}

fn compose_name(outer: &str, inner: &str) -> String {
    format!("{outer}∘{inner}")
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    catalog: &'a MapCatalog,
    domain: Option<SamplingDomain>,
    report: Report,
}

impl<'a> Runner<'a> {
    fn run(&mut self) {
        match self.cfg.kind {
            ExperimentKind::MetricAxioms => self.metric_axioms(),
            ExperimentKind::Isometry => self.isometry(),
            ExperimentKind::Contraction => self.contraction(),
            ExperimentKind::DegreeMultiplicativity => self.degree_multiplicativity(),
            ExperimentKind::TractSurvey => self.tract_survey(),
            ExperimentKind::CharsetVolume => self.charset_volume(),
            ExperimentKind::UnionCheck => self.union_check(),
        }
    }

    /// Looks up a (validated) name and records the map in the report.
    fn entry(&mut self, name: &str) -> &'a CatalogEntry {
        let e = self.catalog.get(name).expect("names are validated");
        self.report.maps.entry(e.name.clone()).or_insert_with(|| MapRecord {
            description: e.description.clone(),
            map: MapJson::from(&e.map),
        });
        e
    }

    fn map(&mut self, name: &str) -> PlanarPolyMap {
        self.entry(name).map.clone()
    }

    fn names_or(&self, given: &Option<Vec<String>>, default: impl FnOnce() -> Vec<String>) -> Vec<String> {
        given.clone().unwrap_or_else(default)
    }

    fn tagged(&self, tag: Tag) -> Vec<String> {
        self.catalog.tagged(tag).iter().map(|e| e.name.clone()).collect()
    }

    /// Automorphisms other than the identity map.
    fn proper_automorphisms(&self) -> Vec<String> {
        let id = PlanarPolyMap::identity();
        self.catalog.tagged(Tag::Automorphism).iter().filter(|e| e.map != id).map(|e| e.name.clone()).collect()
    }

    fn capture(&mut self, operation: &str, inputs: &[String], class: ErrorClass, message: String) {
        self.report.errors.push(CapturedError {
            operation: operation.into(),
            inputs: inputs.to_vec(),
            class,
            message,
        });
    }

    fn samples(&self) -> usize {
        self.cfg.samples.expect("validated")
    }

    fn record_volume(&mut self, operation: &str, inputs: Vec<String>, e: &VolumeEstimate) {
        self.report.measurements.push(Measurement {
            operation: operation.into(),
            inputs,
            seed: e.seed,
            samples: Some(e.samples),
            value: e.value,
            stderr: Some(e.stderr),
            extra: serde_json::Value::Null,
        });
    }

    /// Every distance is bounded by the volume of both images: `2·vol(ball)`.
    fn check_diameter(&mut self, label: &str, e: &VolumeEstimate, d: &SamplingDomain) {
        let bound = 2.0 * d.ball_volume();
        let pass = e.value <= bound + SIGMAS * e.stderr;
        self.report.assert(
            format!("diameter {label}"),
            pass,
            format!("{} ± {} vs 2·vol(ball) = {}", sig(e.value), sig(e.stderr), sig(bound)),
        );
    }

    /// `ρ_d(f, g)`, recorded with its diameter check.
    fn rho(&mut self, fname: &str, gname: &str, f: &PlanarPolyMap, g: &PlanarPolyMap, d: &SamplingDomain) -> Option<VolumeEstimate> {
        let inputs = vec![fname.to_string(), gname.to_string(), d.describe()];
        match rho_d(f, g, d, self.samples(), self.cfg.seed) {
            Ok(e) => {
                self.record_volume("rho", inputs, &e);
                self.check_diameter(&format!("rho({fname}, {gname})"), &e, d);
                Some(e)
            }
            Err(err) => {
                self.capture("rho", &inputs, ErrorClass::of_vol(&err), err.to_string());
                None
            }
        }
    }

    fn domain(&self) -> SamplingDomain {
        self.domain.clone().expect("validated")
    }

    fn metric_axioms(&mut self) {
        let names = self.names_or(&self.cfg.maps, || self.tagged(Tag::Automorphism));
        let maps: Vec<PlanarPolyMap> = names.iter().map(|n| self.map(n)).collect();
        let d = self.domain();
        for (n, m) in names.iter().zip(&maps) {
            if let Some(e) = self.rho(n, n, m, m, &d) {
                let pass = e.value == 0.0 && e.stderr == 0.0;
                self.report.assert(format!("rho({n}, {n}) = 0"), pass, format!("{} ± {}", e.value, e.stderr));
            } else {
                self.report.assert(format!("rho({n}, {n}) = 0"), false, "estimate failed");
            }
        }
        // The estimator is symmetric in (f, g), so one estimate per unordered pair.
        let mut dist: HashMap<(usize, usize), VolumeEstimate> = HashMap::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if let Some(e) = self.rho(&names[i], &names[j], &maps[i], &maps[j], &d) {
                    dist.insert((i, j), e);
                }
            }
        }
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                for k in j + 1..names.len() {
                    let label = format!("triangle({}, {}, {})", names[i], names[j], names[k]);
                    let legs = [(i, j), (j, k), (i, k)].map(|p| dist.get(&p).cloned());
                    let [Some(a), Some(b), Some(c)] = legs else {
                        self.report.assert(label, false, "a side estimate failed");
                        continue;
                    };
                    let tol = SIGMAS * combined_stderr(&[a.stderr, b.stderr, c.stderr]);
                    // slack of each of the three inequalities
                    let slack = [b.value + c.value - a.value, a.value + c.value - b.value, a.value + b.value - c.value];
                    let worst = slack.iter().copied().fold(f64::INFINITY, f64::min);
                    self.report.assert(
                        label,
                        worst >= -tol,
                        format!("min slack {} (tolerance {})", sig(worst), sig(tol)),
                    );
                }
            }
        }
    }

    fn default_triples(&self) -> Vec<[String; 3]> {
        let outer = self.proper_automorphisms();
        let autos = self.tagged(Tag::Automorphism);
        let pairs: Vec<(usize, usize)> =
            (0..autos.len()).flat_map(|i| (i + 1..autos.len()).map(move |j| (i, j))).collect();
        if outer.is_empty() || pairs.is_empty() {
            return Vec::new();
        }
        (0..DEFAULT_TRIPLES)
            .map(|k| {
                let (i, j) = pairs[(3 * k + 1) % pairs.len()];
                [outer[k % outer.len()].clone(), autos[i].clone(), autos[j].clone()]
            })
            .collect()
    }

    fn isometry(&mut self) {
        let triples = self.cfg.triples.clone().unwrap_or_else(|| self.default_triples());
        let d = self.domain();
        let mut base: HashMap<(String, String), Option<VolumeEstimate>> = HashMap::new();
        for [a, g1, g2] in &triples {
            let (am, m1, m2) = (self.map(a), self.map(g1), self.map(g2));
            let key = (g1.clone(), g2.clone());
            let den = match base.get(&key) {
                Some(e) => e.clone(),
                None => {
                    let e = self.rho(g1, g2, &m1, &m2, &d);
                    base.insert(key, e.clone());
                    e
                }
            };
            let (n1, n2) = (compose_name(a, g1), compose_name(a, g2));
            let num = self.rho(&n1, &n2, &am.compose(&m1), &am.compose(&m2), &d);
            let label = format!("isometry {a}: rho({n1}, {n2}) = rho({g1}, {g2})");
            match (num, den) {
                (Some(n), Some(dn)) => {
                    let tol = SIGMAS * combined_stderr(&[n.stderr, dn.stderr]);
                    let diff = (n.value - dn.value).abs();
                    self.report.assert(label, diff <= tol, format!("|difference| {} (tolerance {})", sig(diff), sig(tol)));
                }
                _ => {
                    self.report.assert(label, false, "an estimate failed");
                }
            }
        }
    }

    fn default_contraction_pairs(&self) -> Vec<[String; 2]> {
        if self.catalog.get("identity").is_some() && self.catalog.get("translate").is_some() {
            return vec![["identity".into(), "translate".into()]];
        }
        let autos = self.tagged(Tag::Automorphism);
        match autos.as_slice() {
            [a, b, ..] => vec![[a.clone(), b.clone()]],
            _ => Vec::new(),
        }
    }

    fn contraction(&mut self) {
        let outer = self.names_or(&self.cfg.outer, || self.tagged(Tag::Keller));
        let pairs = self.cfg.pairs.clone().unwrap_or_else(|| self.default_contraction_pairs());
        let scales = self.cfg.scales.clone().expect("validated");
        let d = self.domain();
        for f in &outer {
            let fe = self.entry(f);
            let fm = fe.map.clone();
            let is_auto = fe.has(Tag::Automorphism);
            for [g1, g2] in &pairs {
                let (m1, m2) = (self.map(g1), self.map(g2));
                let inputs = vec![f.clone(), g1.clone(), g2.clone(), d.describe()];
                let series = match contraction_ratio(&fm, &m1, &m2, &d, &scales, self.samples(), self.cfg.seed) {
                    Ok(s) => s,
                    Err(err) => {
                        self.capture("contraction_ratio", &inputs, ErrorClass::of_vol(&err), err.to_string());
                        self.report.assert(format!("contraction {f}: ({g1}, {g2})"), false, err.to_string());
                        continue;
                    }
                };
                let (n1, n2) = (compose_name(f, g1), compose_name(f, g2));
                for p in &series.points {
                    let dt = d.dilated(p.scale);
                    self.record_volume("rho", vec![n1.clone(), n2.clone(), dt.describe()], &p.numerator);
                    self.record_volume("rho", vec![g1.clone(), g2.clone(), dt.describe()], &p.denominator);
                    self.report.measurements.push(Measurement {
                        operation: "contraction_ratio".into(),
                        inputs: inputs.clone(),
                        seed: self.cfg.seed,
                        samples: Some(self.samples()),
                        value: p.ratio,
                        stderr: Some(p.stderr),
                        extra: json!({ "scale": p.scale }),
                    });
                    let t = sig(p.scale);
                    self.check_diameter(&format!("rho({n1}, {n2}) at t={t}"), &p.numerator, &dt);
                    self.check_diameter(&format!("rho({g1}, {g2}) at t={t}"), &p.denominator, &dt);
                    let tol = SIGMAS * combined_stderr(&[p.numerator.stderr, p.denominator.stderr]);
                    let excess = p.numerator.value - p.denominator.value;
                    self.report.assert(
                        format!("contraction {f}: rho({n1}, {n2}) <= rho({g1}, {g2}) at t={t}"),
                        excess <= tol,
                        format!("excess {} (tolerance {})", sig(excess), sig(tol)),
                    );
                    if is_auto {
                        let (lo, hi) = RATIO_BAND;
                        self.report.assert(
                            format!("ratio {f}: ({g1}, {g2}) at t={t} in [{lo}, {hi}]"),
                            (lo..=hi).contains(&p.ratio),
                            format!("{} ± {}", sig(p.ratio), sig(p.stderr)),
                        );
                    }
                }
                if fm == PlanarPolyMap::identity() {
                    let exact = series.points.iter().all(|p| p.ratio == 1.0);
                    self.report.assert(format!("ratio {f}: ({g1}, {g2}) exactly 1"), exact, format!("{:?}", series.ratios()));
                }
                if let (true, Some(last)) = (is_auto, series.points.last()) {
                    let dev = (last.ratio - 1.0).abs();
                    self.report.assert(
                        format!("ratio {f}: ({g1}, {g2}) at t={} within {SIGMAS}σ of 1", sig(last.scale)),
                        dev <= SIGMAS * last.stderr,
                        format!("{} ± {}", sig(last.ratio), sig(last.stderr)),
                    );
                }
            }
        }
    }

    fn default_degree_pairs(&self) -> Vec<[String; 2]> {
        let powers = self.tagged(Tag::Power);
        let autos = self.proper_automorphisms();
        let total = (powers.len() * autos.len()).min(DEFAULT_PAIRS);
        (0..total)
            .map(|k| {
                let p = powers[k % powers.len()].clone();
                let a = autos[(k / powers.len()) % autos.len()].clone();
                if (k + k / powers.len()) % 2 == 0 {
                    [p, a]
                } else {
                    [a, p]
                }
            })
            .collect()
    }

    fn degree(&mut self, name: &str, f: &PlanarPolyMap) -> Option<DegreeReport> {
        let trials = self.cfg.trials.unwrap_or(DEFAULT_TRIALS);
        let inputs = vec![name.to_string()];
        match geometric_degree_report(f, trials, self.cfg.seed, DEFAULT_TOL) {
            Ok(r) => {
                self.report.measurements.push(Measurement {
                    operation: "geometric_degree".into(),
                    inputs,
                    seed: self.cfg.seed,
                    samples: Some(trials),
                    value: r.degree as f64,
                    stderr: None,
                    extra: json!({ "cardinalities": r.cardinalities, "bezout_bound": r.bezout_bound }),
                });
                let max = r.cardinalities.iter().copied().max().unwrap_or(0);
                self.report.assert(
                    format!("bezout {name}"),
                    max <= r.bezout_bound,
                    format!("max fiber {max}, bound {}", r.bezout_bound),
                );
                Some(r)
            }
            Err(err) => {
                self.capture("geometric_degree", &inputs, ErrorClass::of_fiber(&err), err.to_string());
                None
            }
        }
    }

    fn degree_multiplicativity(&mut self) {
        let names = self.names_or(&self.cfg.maps, || {
            self.catalog.entries.iter().filter(|e| e.expected_degree.is_some()).map(|e| e.name.clone()).collect()
        });
        let mut degrees: HashMap<String, Option<usize>> = HashMap::new();
        for n in &names {
            let e = self.entry(n);
            let expected = e.expected_degree.map(|d| d as usize).or(e.has(Tag::Automorphism).then_some(1));
            let r = self.degree(n, &e.map.clone());
            let got = r.map(|r| r.degree);
            if let Some(x) = expected {
                self.report.assert(format!("degree {n} = {x}"), got == Some(x), format!("observed {got:?}"));
            }
            degrees.insert(n.clone(), got);
        }
        let pairs = self.cfg.pairs.clone().unwrap_or_else(|| self.default_degree_pairs());
        for [a, b] in &pairs {
            let mut single = |r: &mut Self, n: &String| -> Option<usize> {
                if let Some(d) = degrees.get(n) {
                    return *d;
                }
                let m = r.map(n);
                let d = r.degree(n, &m).map(|x| x.degree);
                degrees.insert(n.clone(), d);
                d
            };
            let (da, db) = (single(self, a), single(self, b));
            let name = compose_name(a, b);
            let composed = self.map(a).compose(&self.map(b));
            let dab = self.degree(&name, &composed).map(|r| r.degree);
            let pass = matches!((da, db, dab), (Some(x), Some(y), Some(z)) if z == x * y);
            self.report.assert(
                format!("d({name}) = d({a})·d({b})"),
                pass,
                format!("observed {dab:?}, factors {da:?}·{db:?}"),
            );
        }
    }

    fn tract_survey(&mut self) {
        let names = self.names_or(&self.cfg.maps, || self.catalog.names().into_iter().map(String::from).collect());
        let bounds = self.cfg.bounds.expect("validated");
        for n in &names {
            let e = self.entry(n);
            let s = tract_search_report(&e.map, bounds);
            let tracts: Vec<_> = s
                .tracts
                .iter()
                .map(|t| json!({ "tract": TractJson::from(&t.tract), "display": t.tract.to_string(), "flags": t.validation.flags }))
                .collect();
            self.report.measurements.push(Measurement {
                operation: "tract_search".into(),
                inputs: vec![n.clone()],
                seed: self.cfg.seed,
                samples: None,
                value: s.tracts.len() as f64,
                stderr: None,
                extra: json!({ "bounds": bounds, "tracts": tracts, "unresolved": s.unresolved }),
            });
            for t in &s.tracts {
                let dual = dual_map(&e.map, &t.tract);
                let detail = match &dual {
                    Ok(g) => g.to_string(),
                    Err(err) => err.to_string(),
                };
                self.report.assert(format!("dual map of {n} along {} is polynomial", t.tract), dual.is_ok(), detail);
            }
            if e.has(Tag::Automorphism) {
                self.report.assert(
                    format!("automorphism {n} has no tracts"),
                    s.tracts.is_empty() && s.unresolved.is_empty(),
                    format!("{} tracts, {} unresolved cells", s.tracts.len(), s.unresolved.len()),
                );
            }
        }
    }

    fn build_charset(&mut self, fatten: f64) -> Option<CharacteristicSet> {
        let p = self.cfg.charset.expect("validated");
        match build_characteristic_set(p.radius, p.slices, p.bundles, fatten, self.cfg.seed) {
            Ok(s) => Some(s),
            Err(err) => {
                let inputs = vec![format!("R={}, K={}, B={}, r={fatten}", p.radius, p.slices, p.bundles)];
                self.capture("build_characteristic_set", &inputs, ErrorClass::Module, err.to_string());
                None
            }
        }
    }

    fn charset_volume(&mut self) {
        let p = self.cfg.charset.expect("validated");
        let Some(set) = self.build_charset(p.fatten) else {
            self.report.assert("characteristic set invariants", false, "construction failed");
            return;
        };
        // Construction only succeeds after every invariant has been verified.
        self.report.assert(
            "characteristic set invariants",
            true,
            format!("{} slices, {} stars: disjoint, decay chain, unique valences", set.slices.len(), set.star_count()),
        );
        let identity = PlanarPolyMap::identity();
        for (label, s) in [("D", Some(set.clone())), ("D(r=0)", if p.fatten == 0.0 { None } else { self.build_charset(0.0) })] {
            let Some(s) = s else { continue };
            let d = SamplingDomain::charset(s);
            let inputs = vec![label.to_string(), d.describe()];
            match multiplicity_volume(&identity, &d, self.samples(), self.cfg.seed) {
                Ok(e) => {
                    let exact = d.exact_volume();
                    self.record_volume("volume", inputs, &e);
                    self.report.assert(
                        format!("vol({label}) = {}", sig(exact)),
                        e.within(exact, SIGMAS),
                        format!("{} ± {}", sig(e.value), sig(e.stderr)),
                    );
                }
                Err(err) => self.capture("volume", &inputs, ErrorClass::of_vol(&err), err.to_string()),
            }
        }
        let gap = if p.slices > 1 { 1.0 / (p.slices as f64 * (p.slices as f64 - 1.0)) } else { 0.5 };
        let r = gap / 4.0;
        if let (Some(a), Some(b)) = (self.build_charset(r), self.build_charset(2.0 * r)) {
            let (va, vb) = (a.removed_volume(), b.removed_volume());
            for (rr, v) in [(r, va), (2.0 * r, vb)] {
                self.report.measurements.push(Measurement {
                    operation: "removed_volume".into(),
                    inputs: vec![format!("r={rr}")],
                    seed: self.cfg.seed,
                    samples: None,
                    value: v,
                    stderr: None,
                    extra: serde_json::Value::Null,
                });
            }
            self.report.assert(
                "removed volume scales as r²",
                va > 0.0 && vb == 4.0 * va,
                format!("{} at r, {} at 2r", sig(va), sig(vb)),
            );
        } else {
            self.report.assert("removed volume scales as r²", false, "construction failed");
        }
        self.report.assert(
            "ball volume closed form",
            (SamplingDomain::charset(set).ball_volume() - PI * PI * p.radius.powi(4) / 2.0).abs() == 0.0,
            format!("pi²R⁴/2 = {}", sig(PI * PI * p.radius.powi(4) / 2.0)),
        );
    }

    fn default_union_pairs(&self) -> Vec<[String; 2]> {
        let inner = self.tagged(Tag::Exploratory);
        let mut outer = inner.clone();
        outer.extend(self.tagged(Tag::Power));
        outer.iter().flat_map(|f| inner.iter().map(move |g| [f.clone(), g.clone()])).collect()
    }

    fn union_check(&mut self) {
        let pairs = self.cfg.pairs.clone().unwrap_or_else(|| self.default_union_pairs());
        let bounds = self.cfg.bounds.expect("validated");
        for [f, g] in &pairs {
            let (fm, gm) = (self.map(f), self.map(g));
            let rep = asymptotic_union_check(&fm, &gm, bounds);
            let contained = rep.samples.iter().filter(|s| s.contained).count();
            self.report.measurements.push(Measurement {
                operation: "union_check".into(),
                inputs: vec![f.clone(), g.clone()],
                seed: self.cfg.seed,
                samples: Some(rep.samples.len()),
                value: contained as f64,
                stderr: None,
                extra: json!({
                    "bounds": bounds,
                    "f_tracts": rep.f_tracts,
                    "g_tracts": rep.g_tracts,
                    "fg_tracts": rep.fg_tracts,
                    "monotone": rep.monotone,
                    "verdict": rep.verdict,
                }),
            });
            self.report.assert(
                format!("tracts of {g} recur for {}", compose_name(f, g)),
                rep.monotone,
                format!("{} tracts of {g}, {} of the composite", rep.g_tracts, rep.fg_tracts),
            );
            self.report.assert(
                format!("{f} maps A({g}) into A({})", compose_name(f, g)),
                rep.verdict,
                format!("{contained}/{} samples contained", rep.samples.len()),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::config::DomainSpec;
    use crate::tracts::SearchBounds;

    #[test]
    fn contraction_with_identity_is_exactly_one() {
        let cat = MapCatalog::bundled();
        let mut c = ExperimentConfig::new(ExperimentKind::Contraction, 5);
        c.samples = Some(20_000);
        c.domain = Some(DomainSpec::Ball { radius: 1.0 });
        c.scales = Some(vec![1.0, 2.0]);
        c.outer = Some(vec!["identity".into()]);
        let r = run_experiment(&c, &cat).unwrap();
        assert!(r.passed, "{}", r.summary());
        let ratios: Vec<f64> =
            r.measurements.iter().filter(|m| m.operation == "contraction_ratio").map(|m| m.value).collect();
        assert_eq!(ratios, vec![1.0, 1.0]);
    }

    #[test]
    fn degree_on_power_pairs() {
        let cat = MapCatalog::bundled();
        let mut c = ExperimentConfig::new(ExperimentKind::DegreeMultiplicativity, 0);
        c.maps = Some(vec!["power_x2".into(), "power_y3".into()]);
        c.pairs = Some(vec![["power_x2".into(), "power_y3".into()], ["power_y3".into(), "shear_x".into()]]);
        let r = run_experiment(&c, &cat).unwrap();
        assert!(r.passed, "{}", r.summary());
        assert_eq!(r.exit_code, 0);
        let composite = r.measurements.iter().find(|m| m.inputs == ["power_x2∘power_y3"]).unwrap();
        assert_eq!(composite.value, 6.0);
        assert!(r.maps.contains_key("shear_x"));
    }

    #[test]
    fn module_errors_are_captured() {
        // (X, Y) against a map with a one-dimensional image: no fiber solver exists.
        let text = r#"{"maps":[
          {"name":"flat","tags":["exploratory"],"map":{"first":{"terms":[{"i":1,"j":0,"re":["1","1"],"im":["0","1"]}]},
                                                     "second":{"terms":[{"i":2,"j":0,"re":["1","1"],"im":["0","1"]}]}}}]}"#;
        let cat = crate::lab::catalog::parse_catalog_str(text).unwrap();
        let mut c = ExperimentConfig::new(ExperimentKind::DegreeMultiplicativity, 0);
        c.maps = Some(vec!["flat".into()]);
        c.pairs = Some(vec![]);
        let r = run_experiment(&c, &cat).unwrap();
        assert!(!r.passed);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.exit_code, crate::lab::EXIT_ASSERTION);
    }

    #[test]
    fn tract_survey_flags_nothing_on_automorphisms() {
        let cat = MapCatalog::bundled();
        let mut c = ExperimentConfig::new(ExperimentKind::TractSurvey, 0);
        c.bounds = Some(SearchBounds::new(2, 2, 1));
        c.maps = Some(vec!["xy".into(), "shear_x".into()]);
        let r = run_experiment(&c, &cat).unwrap();
        assert!(r.passed, "{}", r.summary());
        assert!(r.measurements[0].value >= 1.0);
        assert_eq!(r.measurements[1].value, 0.0);
    }

    #[test]
    fn invalid_config_is_an_input_error() {
        let cat = MapCatalog::bundled();
        let c = ExperimentConfig::new(ExperimentKind::Isometry, 0);
        assert!(run_experiment(&c, &cat).is_err());
        assert!(with_workers(Some(0), || ()).is_err());
    }
}
