use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use cext::abgroup::{Quotient, Subgroup};
use cext::algebra::io::{parse_algebra, write_algebra};
use cext::algebra::{first_failing_axiom, presentation_of, FiniteAlgebra, FreePresentation};
use cext::cohomology::{h2, hochschild_serre_check, presentation_idempotent};
use cext::commutator::{center, tc_commutator};
use cext::congruence::{all_congruences, Partition};
use cext::extension::{basic_construction, parse_cocycle, write_cocycle, CentralExtension, KernelAlgebra};
use cext::report::Report;
use cext::repro::{self, Params};
use cext::schur::{cover_construct, schur_multiplier};
use cext::termlang::{parse_variety, VarietySpec};

use crate::error::CliError;
use crate::{Command, PresentationArgs};

/// Reads input files and remembers their SHA-256 digests.
#[derive(Default)]
struct Inputs {
    digests: Vec<(String, String)>,
}

impl Inputs {
    fn read(&mut self, name: &str, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.digests.push((name.to_string(), digest));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))
    }

    fn algebra(&mut self, name: &str, path: &Path) -> Result<FiniteAlgebra, CliError> {
        let text = self.read(name, path)?;
        parse_algebra(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
    }

    fn variety(&mut self, path: &Path) -> Result<VarietySpec, CliError> {
        let text = self.read("variety", path)?;
        parse_variety(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
    }

    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command);
        for (k, d) in &self.digests {
            r.input(k, d);
        }
        r
    }
}

fn partition(text: &str, a: &FiniteAlgebra) -> Result<Partition, CliError> {
    match text.trim() {
        "full" | "1" => Ok(Partition::total(a.size())),
        "zero" | "0" => Ok(Partition::zero(a.size())),
        other => Ok(Partition::parse(other, a.size())?),
    }
}

fn invariant_factors(k: &KernelAlgebra) -> Vec<u64> {
    let m = k.moduli();
    Quotient::new(&Subgroup::full(m), &Subgroup::zero(m)).map(|q| q.invariant_factors()).unwrap_or_default()
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn presentation(inputs: &mut Inputs, p: &PresentationArgs, budget: usize) -> Result<(VarietySpec, FreePresentation), CliError> {
    let v = inputs.variety(&p.variety)?;
    let g = inputs.algebra("generator", &p.generator)?;
    let q = inputs.algebra("target", &p.target)?;
    if let Some(i) = first_failing_axiom(&g, &v.axioms) {
        return Err(cext::Error::NotInVariety(format!("{} fails axiom {i}", g.name())).into());
    }
    Ok((v, presentation_of(&q, &g, p.k, &p.images, budget)?))
}

pub fn dispatch(cmd: Command) -> Result<Vec<Report>, CliError> {
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let mut r = match cmd {
        Command::Validate { algebra, variety } => validate(&mut inputs, &algebra, variety.as_deref())?,
        Command::Con { algebra, limits } => {
            let a = inputs.algebra("algebra", &algebra)?;
            let cons = all_congruences(&a, limits.limit)?;
            let mut r = inputs.report("con");
            r.field("size", a.size()).field("count", cons.len());
            for (i, c) in cons.iter().enumerate() {
                r.field(&format!("congruence.{i}"), c.partition());
            }
            r
        }
        Command::Comm { algebra, alpha, beta, trace, limits } => {
            let a = inputs.algebra("algebra", &algebra)?;
            let (al, be) = (partition(&alpha, &a)?, partition(&beta, &a)?);
            let c = tc_commutator(&a, &al, &be, limits.budget)?;
            let mut r = inputs.report("comm");
            r.field("commutator", c.value.partition());
            r.field("matrix_size", c.trace.matrix_size).field("rounds", c.trace.rounds.len());
            if trace {
                for (i, round) in c.trace.rounds.iter().enumerate() {
                    r.field(&format!("round.{}", i + 1), &round.tau);
                }
            }
            r
        }
        Command::Center { algebra, variety, limits } => {
            let a = inputs.algebra("algebra", &algebra)?;
            let v = inputs.variety(&variety)?;
            let z = center(&a, &v, limits.budget)?;
            let mut r = inputs.report("center");
            r.field("center", z.partition()).field("blocks", z.partition().num_blocks());
            r
        }
        Command::Kernel { algebra, alpha, variety, write, limits } => {
            let a = inputs.algebra("algebra", &algebra)?;
            let v = inputs.variety(&variety)?;
            let al = partition(&alpha, &a)?;
            let ext = CentralExtension::from_congruence(&a, &al, &v, limits.budget)?;
            let k = ext.kernel();
            let mut r = inputs.report("kernel");
            r.field("quotient_size", ext.quotient().size()).field("kernel_size", k.size()).field("zero", k.zero());
            r.list("invariant_factors", &invariant_factors(k));
            if let Some(path) = write {
                write_file(&path, &write_algebra(k.algebra()))?;
            }
            r
        }
        Command::Extend { b, q, cocycle, variety, write } => {
            let v = inputs.variety(&variety)?;
            let b = KernelAlgebra::from_variety(inputs.algebra("b", &b)?, &v)?;
            let q = inputs.algebra("q", &q)?;
            let text = inputs.read("cocycle", &cocycle)?;
            let t = parse_cocycle(&text, q.signature(), q.size(), b.size())
                .map_err(|source| CliError::Parse { path: cocycle.clone(), source })?;
            let (a, _) = basic_construction(&b, &q, &t)?;
            let failing = first_failing_axiom(&a, &v.axioms);
            let mut r = inputs.report("extend");
            r.field("size", a.size()).field("in_variety", failing.is_none());
            if let Some(i) = failing {
                r.field("failing_axiom", v.axioms[i].display(&v.signature));
            }
            if let Some(path) = write {
                write_file(&path, &write_algebra(&a))?;
            }
            r
        }
        Command::H2 { q, b, variety, reps, limits } => {
            let v = inputs.variety(&variety)?;
            let q = inputs.algebra("q", &q)?;
            let b = KernelAlgebra::from_variety(inputs.algebra("b", &b)?, &v)?;
            let h = h2(&q, &b, &v)?;
            let mut r = inputs.report("h2");
            r.extend(&h);
            for (i, (y, t)) in h.representatives(limits.limit)?.iter().enumerate() {
                r.list(&format!("class.{i}"), y);
                if let Some(dir) = &reps {
                    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
                    let path: PathBuf = dir.join(format!("class_{i}.coc"));
                    write_file(&path, &write_cocycle(q.signature(), q.size(), t))?;
                }
            }
            r
        }
        Command::Hs { algebra, alpha, e, variety, limits } => {
            let v = inputs.variety(&variety)?;
            let a = inputs.algebra("algebra", &algebra)?;
            let e = KernelAlgebra::from_variety(inputs.algebra("e", &e)?, &v)?;
            let ext = CentralExtension::from_congruence(&a, &partition(&alpha, &a)?, &v, limits.budget)?;
            let hs = hochschild_serre_check(&ext, &e, &v, None)?;
            let mut r = inputs.report("hs");
            r.extend(&hs);
            r
        }
        Command::Schur { presentation: p, limits } => {
            let (v, pres) = presentation(&mut inputs, &p, limits.budget)?;
            let m = schur_multiplier(&pres, &v, limits.budget)?;
            let mut r = inputs.report("schur");
            r.field("presentation_idempotent", presentation_idempotent(&pres, limits.budget)?);
            r.extend(&m);
            r
        }
        Command::Cover { presentation: p, limits } => {
            let (v, pres) = presentation(&mut inputs, &p, limits.budget)?;
            let c = cover_construct(&pres, &v, &[], limits.budget, limits.limit)?;
            let mut r = inputs.report("cover");
            r.extend(&c).field("is_cover", c.is_cover());
            r
        }
        Command::Repro { name, n, m, k, seed, samples } => {
            let params = Params { n, m, k, seed, samples };
            if name == "all" {
                return repro::NAMES.iter().map(|name| Ok(repro::run(name, &params)?)).collect();
            }
            if !repro::NAMES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!("unknown check `{name}`; expected one of {}", repro::NAMES.join(", "))));
            }
            return Ok(vec![repro::run(&name, &params)?]);
        }
    };
    r.timing("total", start.elapsed().as_secs_f64());
    Ok(vec![r])
}

fn validate(inputs: &mut Inputs, algebra: &Path, variety: Option<&Path>) -> Result<Report, CliError> {
    let a = inputs.algebra("algebra", algebra)?;
    let v = variety.map(|p| inputs.variety(p)).transpose()?;
    let mut r = inputs.report("validate");
    r.field("name", a.name()).field("size", a.size()).field("signature", a.signature());
    if let Some(v) = v {
        if !a.signature().same_symbols(&v.signature) {
            return Err(cext::Error::SignatureMismatch(format!("{} vs {}", a.signature(), v.signature)).into());
        }
        let failing = first_failing_axiom(&a, &v.axioms);
        r.field("in_variety", failing.is_none());
        if let Some(i) = failing {
            r.field("failing_axiom", v.axioms[i].display(&v.signature));
        }
    }
    Ok(r)
}
