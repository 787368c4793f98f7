use std::path::{Path, PathBuf};
use std::sync::Arc;

use affkl::affweyl::CosetFilter;
use affkl::antispherical::ParabolicModule;
use affkl::hecke::{HeckeAlgebra, HeckeElt};
use affkl::kl::KLCache;
use affkl::modular::{weyl_sign_rule, weyl_sign_rule_stepwise, Setup};
use affkl::rootdata::Degree;
use affkl::semiperiodic::Semiperiodic;
use affkl::{AffineElt, AffineWeyl, Error, LaurentPoly, NilpotentDatum, Result, Weight};
use num_bigint::BigInt;

use crate::spec::{CacheAction, Command, JobSpec, Suite};
use crate::table::Table;

/// A finished command: its table and whether any checked identity failed.
pub struct Outcome {
    pub table: Table,
    pub failures: usize,
}

/// Cache files live in one directory, one file per (datum, parabolic) context.
struct CacheDir {
    dir: Option<PathBuf>,
}

fn file_name(datum: &str, parabolic: &[usize]) -> String {
    let p: Vec<String> = parabolic.iter().map(|i| i.to_string()).collect();
    format!("{datum}-P{}.klc", if p.is_empty() { "none".into() } else { p.join("_") })
}

impl CacheDir {
    fn path(&self, g: &AffineWeyl, parabolic: &[usize]) -> Option<PathBuf> {
        let mut p = parabolic.to_vec();
        p.sort_unstable();
        p.dedup();
        self.dir.as_ref().map(|d| d.join(file_name(g.datum().label(), &p)))
    }

    fn load(&self, g: &AffineWeyl, parabolic: &[usize]) -> Result<KLCache> {
        match self.path(g, parabolic) {
            Some(path) if path.exists() => KLCache::load(g, parabolic, &path),
            _ => Ok(KLCache::new(g.datum().label(), parabolic)),
        }
    }

    fn save(&self, g: &AffineWeyl, cache: &KLCache) -> Result<()> {
        if let Some(path) = self.path(g, cache.parabolic()) {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            cache.save(g, &path)?;
        }
        Ok(())
    }
}

fn parse_element(g: &AffineWeyl, s: &str) -> Result<AffineElt> {
    let t = s.trim();
    if t == "e" || t.is_empty() {
        Ok(g.identity())
    } else if t.contains('|') {
        g.parse(t)
    } else {
        let word = t
            .split(',')
            .map(|c| c.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad element `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        g.from_word(&word)
    }
}

/// Maps `f` over `items` on up to `threads` scoped workers, keeping order.
fn par_map<T: Sync, U: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> Result<U> + Sync) -> Result<Vec<U>> {
    if threads <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let parts: Vec<Result<Vec<U>>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Result<Vec<U>>>())).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(items.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

struct Job<'a> {
    spec: &'a JobSpec,
    g: Arc<AffineWeyl>,
    caches: CacheDir,
}

impl<'a> Job<'a> {
    fn p(&self) -> Result<i64> {
        self.spec.p.ok_or_else(|| Error::Invalid("--p is required".into()))
    }

    fn mu0(&self) -> Result<Option<Weight>> {
        match &self.spec.mu0 {
            None => Ok(None),
            Some(c) => {
                let w = Weight::new(c.iter().copied());
                self.g.datum().check_weight(&w)?;
                Ok(Some(w))
            }
        }
    }

    fn elements(&self, filter: CosetFilter) -> Result<Vec<AffineElt>> {
        if self.spec.x.is_empty() {
            self.g.enumerate(self.spec.max_len, &filter)
        } else {
            self.spec.x.iter().map(|s| parse_element(&self.g, s)).collect()
        }
    }

    fn algebra(&self) -> Arc<HeckeAlgebra> {
        Arc::new(HeckeAlgebra::new(self.g.clone()))
    }

    fn module(&self, subset: &[usize]) -> Result<Arc<ParabolicModule>> {
        Ok(Arc::new(ParabolicModule::new(self.algebra(), subset)?))
    }

    fn setup(&self) -> Result<Setup> {
        let h = self.spec.h.clone().ok_or_else(|| Error::Invalid("--h is required".into()))?;
        let nil = match &self.spec.nu {
            None => NilpotentDatum::distinguished(h),
            Some(nu) => NilpotentDatum::with_nu(h, nu.clone()),
        };
        Ok(Setup::new(self.g.clone(), nil, self.p()?, self.mu0()?)?
            .with_window(self.spec.window)
            .with_theta_budget(self.spec.theta_budget))
    }

    fn kl_rows(&self, table: &mut Table, elts: &[AffineElt], compute: impl Fn(&AffineElt) -> Result<Arc<HeckeElt>> + Sync) -> Result<()> {
        let results = par_map(elts, self.spec.threads, |x| compute(x))?;
        for (x, c) in elts.iter().zip(results) {
            let xe = self.g.encode(x);
            for (y, poly) in c.sorted_terms(&self.g) {
                table.push(vec![xe.clone(), self.g.encode(&y), poly.to_string()]);
            }
        }
        Ok(())
    }

    fn kl(&self) -> Result<Outcome> {
        let alg = self.algebra();
        let cache = self.caches.load(&self.g, &[])?;
        let elts = self.elements(CosetFilter::All)?;
        let mut table = Table::new("kl", &["x", "y", "c"]);
        self.kl_rows(&mut table, &elts, |x| alg.kl_element(x, &cache))?;
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn pkl(&self) -> Result<Outcome> {
        let m = self.module(&self.spec.parabolic)?;
        let cache = self.caches.load(&self.g, m.subset())?;
        let elts = self.elements(CosetFilter::LongestInWP(m.subset().to_vec()))?;
        let mut table = Table::new("pkl", &["x", "y", "c"]);
        table.meta("parabolic", format!("{:?}", m.subset()));
        self.kl_rows(&mut table, &elts, |x| m.kl_element(x, &cache))?;
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn spkl(&self) -> Result<Outcome> {
        let m = self.module(&self.spec.parabolic)?;
        let underline = self.spec.underline.clone().unwrap_or_else(|| m.subset().to_vec());
        let sp = Semiperiodic::new(m.clone(), &underline)?.with_budget(self.spec.theta_budget);
        let cache = self.caches.load(&self.g, m.subset())?;
        let elts = self.elements(CosetFilter::LongestInWP(m.subset().to_vec()))?;
        let window = self.g.enumerate(self.spec.max_len, &CosetFilter::LongestInWP(m.subset().to_vec()))?;
        let mut table = Table::new("spkl", &["x", "y", "value", "certificate"]);
        table.meta("underline", format!("{underline:?}"));
        let rows = par_map(&elts, self.spec.threads, |x| {
            let mut out = Vec::new();
            for y in &window {
                let s = sp.semiperiodic_kl(x, y, &cache)?;
                if !s.value.is_zero() {
                    out.push(vec![self.g.encode(x), self.g.encode(y), s.value.to_string(), s.certificate()]);
                }
            }
            Ok(out)
        })?;
        rows.into_iter().flatten().for_each(|r| table.push(r));
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn cells(&self) -> Result<Outcome> {
        let m = self.module(&self.spec.parabolic)?;
        let cache = self.caches.load(&self.g, m.subset())?;
        let report = m.cell_in_window(self.spec.window, &cache)?;
        let mut table = Table::new("cells", &["x", "length", "confidence"]);
        table.meta("window", report.window);
        table.meta("stable", report.stable);
        // Cells through length-zero elements rest on Ω-translation invariance.
        if report.members.iter().any(|x| self.g.decompose(x).omega != 0) {
            table.meta("omega", "convention-dependent");
        }
        for x in &report.members {
            let v = m.in_cell_cp(x, self.spec.window, &cache)?;
            table.push(vec![self.g.encode(x), self.g.length(x).to_string(), v.confidence.as_str().into()]);
        }
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn alcove(&self) -> Result<Outcome> {
        let p = self.p()?;
        let mu0 = self.mu0()?.unwrap_or_else(|| self.g.default_mu0());
        let mut table = Table::new("alcove", &["mu0", "p", "inside", "reason"]);
        let (inside, reason) = match self.g.datum().in_antidominant_alcove(&mu0, p) {
            Ok(true) => ("yes", String::new()),
            Ok(false) => ("no", Error::OutsideAlcove { p }.to_string()),
            Err(e) => return Err(e),
        };
        table.push(vec![mu0.to_string(), p.to_string(), inside.into(), reason]);
        Ok(Outcome { table, failures: 0 })
    }

    fn label(&self) -> Result<Outcome> {
        let p = self.p()?;
        let mu0 = self.mu0()?.unwrap_or_else(|| self.g.default_mu0());
        let mut table = Table::new("label", &["x", "mu"]);
        for x in self.elements(CosetFilter::LongestInWP(self.spec.parabolic.clone()))? {
            table.push(vec![self.g.encode(&x), self.g.mu_x(&x, &mu0, p)?.to_string()]);
        }
        Ok(Outcome { table, failures: 0 })
    }

    fn dim(&self) -> Result<Outcome> {
        let s = self.setup()?;
        let subset = s.analysis().levi.subset().to_vec();
        let cache = self.caches.load(&self.g, &subset)?;
        let mut table = Table::new("dim", &["x", "mu", "dimension", "value", "confidence"]);
        table.meta("setup", s.fingerprint());
        let explicit = !self.spec.x.is_empty();
        for x in self.elements(CosetFilter::LongestInWP(subset))? {
            if !explicit && !s.in_cell(&x, &cache)?.member {
                continue;
            }
            let d = s.dim_distinguished(&x, &cache)?;
            table.push(vec![
                self.g.encode(&x),
                s.mu(&x)?.to_string(),
                format!("p^{} * {}", d.exponent, d.factor),
                d.value(s.p()).to_string(),
                d.cell.confidence.as_str().into(),
            ]);
        }
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn char(&self) -> Result<Outcome> {
        let s = self.setup()?;
        let subset = s.analysis().levi.subset().to_vec();
        let cache = self.caches.load(&self.g, &subset)?;
        let floor = Degree::from_integer(self.spec.floor);
        let mut table = Table::new("char", &["x", "degree", "coefficient", "certificate"]);
        table.meta("setup", s.fingerprint());
        table.meta("floor", floor);
        let explicit = !self.spec.x.is_empty();
        for x in self.elements(CosetFilter::LongestInWP(subset))? {
            if !explicit && !s.underline_cell(&x)?.member {
                continue;
            }
            let r = s.char_general(&x, floor, &cache)?;
            let cert = r.terms.certificate();
            for (d, c) in r.character.terms() {
                table.push(vec![self.g.encode(&x), d.to_string(), c.to_string(), cert.clone()]);
            }
            if r.character.is_zero() {
                table.push(vec![self.g.encode(&x), String::new(), "0".into(), cert]);
            }
        }
        self.caches.save(&self.g, &cache)?;
        Ok(Outcome { table, failures: 0 })
    }

    fn verify(&self, suite: Suite) -> Result<Outcome> {
        let alg = self.algebra();
        let g = &self.g;
        let mut cases: Vec<(String, bool)> = Vec::new();
        match suite {
            Suite::Quadratic => {
                let v = LaurentPoly::v_pow(1);
                let vinv = LaurentPoly::v_pow(-1);
                for i in g.gen_indices() {
                    let hs = alg.basis(g.gen(i)?);
                    let mut a = hs.clone();
                    a.add_scaled(&alg.one(), &v);
                    let mut b = hs;
                    b.add_scaled(&alg.one(), &-vinv.clone());
                    cases.push((format!("s{i}"), alg.mul(&a, &b)?.is_zero()));
                }
            }
            Suite::Bar => {
                for x in g.enumerate(self.spec.max_len, &CosetFilter::All)? {
                    let h = alg.basis(&x);
                    cases.push((g.encode(&x), alg.bar(&alg.bar(&h)?)? == h));
                }
            }
            Suite::Xbar => {
                let n = self.spec.theta_range;
                let r = g.rank();
                let mut theta = vec![-n; r];
                loop {
                    let w = Weight::new(theta.iter().copied());
                    cases.push((w.to_string(), alg.verify_xbar_identity(&w)?));
                    let Some(k) = (0..r).find(|&k| theta[k] < n) else { break };
                    theta[k] += 1;
                    theta[..k].iter_mut().for_each(|c| *c = -n);
                }
            }
            Suite::Kl => {
                let cache = self.caches.load(g, &[])?;
                for x in g.enumerate(self.spec.max_len, &CosetFilter::All)? {
                    let c = alg.kl_element(&x, &cache)?;
                    let triangular = c.iter().all(|(y, p)| if *y == x { p.is_one() } else { p.in_negative_span() });
                    cases.push((g.encode(&x), triangular && alg.bar(&c)? == *c));
                }
                self.caches.save(g, &cache)?;
            }
            Suite::Parabolic => {
                let m = self.module(&self.spec.parabolic)?;
                let pcache = self.caches.load(g, m.subset())?;
                let cache = self.caches.load(g, &[])?;
                for x in g.enumerate(self.spec.max_len, &CosetFilter::LongestInWP(m.subset().to_vec()))? {
                    cases.push((g.encode(&x), m.verify_paths(&x, &pcache, &cache)?));
                }
                self.caches.save(g, &pcache)?;
                self.caches.save(g, &cache)?;
            }
            Suite::Sign => {
                let subset = &self.spec.parabolic;
                for x in g.enumerate(self.spec.max_len, &CosetFilter::All)? {
                    let ok = weyl_sign_rule(g, subset, &x)? == weyl_sign_rule_stepwise(g, subset, &x)?;
                    cases.push((g.encode(&x), ok));
                }
            }
        }
        let name = format!("{suite:?}").to_lowercase();
        let mut table = Table::new("verify", &["suite", "case", "result"]);
        let failures = cases.iter().filter(|(_, ok)| !ok).count();
        for (case, ok) in cases {
            table.push(vec![name.clone(), case, if ok { "pass" } else { "FAIL" }.into()]);
        }
        table.meta("failures", failures);
        Ok(Outcome { table, failures })
    }
}

fn read_cache_file(path: &Path) -> Result<(Arc<AffineWeyl>, KLCache)> {
    let text = std::fs::read_to_string(path)?;
    let (datum, parabolic) = KLCache::<BigInt>::parse_header(text.lines().next().unwrap_or(""))?;
    let g = Arc::new(AffineWeyl::from_label(&datum)?);
    let cache = KLCache::from_text(&g, &parabolic, &text)?;
    Ok((g, cache))
}

fn cache_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "klc"))
        .collect();
    files.sort();
    Ok(files)
}

fn cache_command(spec: &JobSpec, action: CacheAction, sources: &[PathBuf]) -> Result<Outcome> {
    let dir = spec.cache.clone().ok_or_else(|| Error::Invalid("--cache (or AFFKL_CACHE) is required".into()))?;
    let mut table = Table::new("cache", &["file", "header", "entries"]);
    match action {
        CacheAction::Inspect => {
            let files = if dir.is_dir() { cache_files(&dir)? } else { vec![dir.clone()] };
            for f in files {
                let (_, cache) = read_cache_file(&f)?;
                table.push(vec![f.display().to_string(), cache.header(), cache.len().to_string()]);
            }
        }
        CacheAction::Merge => {
            std::fs::create_dir_all(&dir)?;
            for src in sources {
                for f in cache_files(src)? {
                    let (g, incoming) = read_cache_file(&f)?;
                    let target = dir.join(f.file_name().expect("file"));
                    let cache = if target.exists() { read_cache_file(&target)?.1 } else { KLCache::new(incoming.datum(), incoming.parabolic()) };
                    cache.merge(&incoming)?;
                    cache.save(&g, &target)?;
                    table.push(vec![target.display().to_string(), cache.header(), cache.len().to_string()]);
                }
            }
        }
    }
    Ok(Outcome { table, failures: 0 })
}

pub fn execute(spec: &JobSpec) -> Result<Outcome> {
    if let Command::Cache { action, sources } = &spec.command {
        return cache_command(spec, *action, sources);
    }
    let g = Arc::new(AffineWeyl::from_label(&spec.datum)?);
    let job = Job { spec, g, caches: CacheDir { dir: spec.cache.clone() } };
    match &spec.command {
        Command::Kl => job.kl(),
        Command::Pkl => job.pkl(),
        Command::Spkl => job.spkl(),
        Command::Cells => job.cells(),
        Command::Alcove => job.alcove(),
        Command::Label => job.label(),
        Command::Dim => job.dim(),
        Command::Char => job.char(),
        Command::Verify { suite } => job.verify(*suite),
        Command::Cache { .. } => unreachable!(),
    }
}

/// Exit status for an error: 3 when a budget or guard ran out, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } | Error::GuardExceeded { .. } | Error::SupportGuard { .. } => 3,
        _ => 2,
    }
}
