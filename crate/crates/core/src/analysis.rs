//! End-to-end pipelines behind the CLI and the C interface: build a patch from
//! an input descriptor, sample it on a grid and assemble serializable reports.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classify::{
    families_from_pencils, find_immersing_transform, isoparametric_witness, necessary_conditions, reducibility_detect,
    FamilySpan, ImmersionOptions, ImmersionSearch, NecessaryConditions, ReducibilityVerdict, SphereMapSamples, Verdict,
    WitnessSearch, REDUCIBILITY_TOL, SIGNATURE_TOL, WITNESS_TOL,
};
use crate::constructions::{same_curvature, ConstructionKind, ConstructionRef, Cylinder, SurfaceOfRevolution, Tube};
use crate::corpus::{generate, generate_construction, synthetic_isoparametric_pencil, ParamMap};
use crate::curvature::{
    curvature_sphere_residual, dupin_from_pencils, pencil_grid, pencil_lie_curvature, proper_dupin_from_pencils,
    AnalysisOptions, CurvaturePencil, DupinReport, ProperDupin,
};
use crate::error::{Error, Result};
use crate::lift::{contact_residual, LIFT_TOL};
use crate::patch::{Grid, HypersurfacePatch, PatchRef};

pub const TOOL_NAME: &str = "lsk";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Generator name for the planted `g = 4` families, which have no patch.
pub const SYNTHETIC: &str = "synthetic_isoparametric_pencil";

/// Tolerance for matching the predicted new curvature against the pencil.
pub const NEW_FAMILY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self { name: TOOL_NAME.into(), version: VERSION.into() }
    }
}

/// A construction applied on top of a generated profile.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    /// `m` for a revolution, `k` for a tube or cylinder.
    pub fiber_dim: usize,
    /// Tube radius.
    pub eps: Option<f64>,
}

/// What to analyze: a named generator with parameters, optionally followed by
/// a construction.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputDescriptor {
    pub generator: String,
    pub params: ParamMap,
    pub construction: Option<ConstructionSpec>,
}

impl InputDescriptor {
    pub fn named(generator: &str, params: ParamMap) -> Self {
        Self { generator: generator.into(), params, construction: None }
    }
}

/// A built patch, remembering the construction that produced it if any.
#[derive(Clone)]
pub struct Subject {
    pub input: InputDescriptor,
    pub patch: PatchRef,
    pub construction: Option<ConstructionRef>,
}

/// Applies a construction to a Euclidean profile.
pub fn construct(spec: &ConstructionSpec, profile: PatchRef) -> Result<ConstructionRef> {
    let c: ConstructionRef = match spec.kind {
        ConstructionKind::Revolution => Arc::new(SurfaceOfRevolution::new(profile, spec.fiber_dim)?),
        ConstructionKind::Tube => {
            let eps = spec.eps.ok_or_else(|| Error::InvalidParameter("a tube needs a radius eps".into()))?;
            let check = Grid::default_for(profile.domain().dim());
            Arc::new(Tube::new(profile, eps, spec.fiber_dim, &check, &AnalysisOptions::default())?)
        }
        ConstructionKind::Cylinder => Arc::new(Cylinder::new(profile, spec.fiber_dim)?),
    };
    Ok(c)
}

impl Subject {
    pub fn build(input: InputDescriptor) -> Result<Self> {
        if input.generator == SYNTHETIC {
            return Err(Error::InvalidParameter(format!("{SYNTHETIC} produces sphere families, not a patch")));
        }
        let construction = match &input.construction {
            Some(spec) => Some(construct(spec, generate(&input.generator, &input.params)?)?),
            None => generate_construction(&input.generator, &input.params)?,
        };
        let patch: PatchRef = match &construction {
            Some(c) => c.clone(),
            None => generate(&input.generator, &input.params)?,
        };
        Ok(Self { input, patch, construction })
    }
}

/// Thresholds used for every verdict in a report.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Tolerances {
    pub cluster: f64,
    pub dupin: f64,
    pub dupin_step: f64,
    pub contact: f64,
    pub sphere: f64,
    pub rank: f64,
    pub signature: f64,
    pub witness: f64,
    pub lie_curvature: f64,
    pub new_family: f64,
    pub immersion: f64,
}

/// Knobs shared by both pipelines.
#[derive(Debug, Clone)]
pub struct Settings {
    /// `None` picks the default resolution for the parameter dimension.
    pub grid: Option<Grid>,
    pub seed: u64,
    pub analysis: AnalysisOptions,
    pub rank_tol: f64,
    pub signature_tol: f64,
    pub witness_tol: f64,
    /// `None` skips the immersing-transform search.
    pub immersion: Option<ImmersionOptions>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            grid: None,
            seed: 0,
            analysis: AnalysisOptions::default(),
            rank_tol: REDUCIBILITY_TOL,
            signature_tol: SIGNATURE_TOL,
            witness_tol: WITNESS_TOL,
            immersion: Some(ImmersionOptions::default()),
        }
    }
}

impl Settings {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            cluster: self.analysis.cluster_tol,
            dupin: self.analysis.dupin_tol,
            dupin_step: self.analysis.dupin_step,
            contact: LIFT_TOL,
            sphere: SPHERE_TOL,
            rank: self.rank_tol,
            signature: self.signature_tol,
            witness: self.witness_tol,
            lie_curvature: LIE_CURVATURE_TOL,
            new_family: NEW_FAMILY_TOL,
            immersion: self.immersion.map_or(ImmersionOptions::default().tol, |o| o.tol),
        }
    }

    pub fn grid_for(&self, patch: &dyn HypersurfacePatch) -> Result<Grid> {
        let dim = patch.domain().dim();
        match &self.grid {
            Some(g) if g.resolution.len() != dim => {
                Err(Error::DimensionMismatch { expected: dim, found: g.resolution.len() })
            }
            Some(g) => Ok(g.clone()),
            None => Ok(Grid::default_for(dim)),
        }
    }

    fn immersion_opts(&self) -> Option<ImmersionOptions> {
        self.immersion.map(|o| ImmersionOptions { seed: self.seed, ..o })
    }
}

/// Bound on the curvature sphere residual along principal directions.
pub const SPHERE_TOL: f64 = 1e-6;
/// Bound on `|r + 1|` for the Münzner condition.
pub const LIE_CURVATURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub resolution: Vec<usize>,
    pub points: usize,
    /// How many points used each jet source.
    pub jet_sources: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub u: Vec<f64>,
    pub kappas: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LieCurvatureSummary {
    pub r_min: f64,
    pub r_max: f64,
    /// Every point admitted a canonical ordering.
    pub canonical: bool,
    pub pairing_available: bool,
    /// Ordering chosen at the first point.
    pub ordering: [usize; 4],
}

/// Pointwise curvature data condensed over the grid.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureSection {
    pub g: usize,
    pub proper: ProperDupin,
    /// Multiplicities when constant over the grid.
    pub multiplicities: Option<Vec<usize>>,
    /// `[min, max]` of each family when `g` is constant.
    pub kappa_ranges: Option<Vec<[f64; 2]>>,
    pub max_self_adjoint_defect: f64,
    pub max_contact_residual: f64,
    pub contact_ok: bool,
    pub max_sphere_residual: f64,
    pub spheres_ok: bool,
    pub dupin: Option<DupinReport>,
    pub lie_curvature: Option<LieCurvatureSummary>,
    pub points: Vec<PointSummary>,
}

/// Where the curvature added by a construction sits in the pencil.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionCheck {
    pub kind: ConstructionKind,
    pub fiber_dim: usize,
    /// Family index (ascending κ) matching the predicted new curvature at every point.
    pub new_family: Option<usize>,
    /// Points where no family matched.
    pub unmatched_points: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub input: InputDescriptor,
    pub patch: String,
    pub ambient: String,
    pub grid: GridInfo,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub curvature: CurvatureSection,
    pub construction: Option<ConstructionCheck>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub tool: ToolInfo,
    pub input: InputDescriptor,
    pub patch: Option<String>,
    pub grid: Option<GridInfo>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub curvature: Option<CurvatureSection>,
    pub construction: Option<ConstructionCheck>,
    pub reducibility: Option<ReducibilityVerdict>,
    /// Span analysis of the family the construction added.
    pub new_family_span: Option<FamilySpan>,
    pub necessary_conditions: Option<NecessaryConditions>,
    pub witness: Option<WitnessSearch>,
    pub isoparametric: Verdict,
    pub immersion: Option<ImmersionSearch>,
    pub warnings: Vec<String>,
}

/// Pencils over the grid plus the grid metadata.
pub struct Sampled {
    pub grid: Grid,
    pub pencils: Vec<CurvaturePencil>,
}

pub fn sample(subject: &Subject, settings: &Settings) -> Result<Sampled> {
    let grid = settings.grid_for(subject.patch.as_ref())?;
    let pencils = pencil_grid(subject.patch.as_ref(), &grid, &settings.analysis)?;
    Ok(Sampled { grid, pencils })
}

fn grid_info(sampled: &Sampled) -> GridInfo {
    let mut jet_sources = BTreeMap::new();
    for p in &sampled.pencils {
        *jet_sources.entry(format!("{:?}", p.sample.source)).or_insert(0) += 1;
    }
    GridInfo { resolution: sampled.grid.resolution.clone(), points: sampled.pencils.len(), jet_sources }
}

fn curvature_section(
    patch: &dyn HypersurfacePatch,
    pencils: &[CurvaturePencil],
    settings: &Settings,
    warnings: &mut Vec<String>,
) -> Result<CurvatureSection> {
    let proper = proper_dupin_from_pencils(pencils)?;
    let first = &pencils[0];
    let mults = first.multiplicities();
    let constant = proper.is_proper && pencils.iter().all(|p| p.multiplicities() == mults);
    let kappa_ranges = constant.then(|| {
        (0..proper.g)
            .map(|i| {
                pencils.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], p| {
                    let k = p.curvatures()[i].value();
                    [lo.min(k), hi.max(k)]
                })
            })
            .collect()
    });
    let mut max_contact: f64 = 0.0;
    let mut max_sphere: f64 = 0.0;
    let mut max_adjoint: f64 = 0.0;
    for p in pencils {
        max_contact = max_contact.max(contact_residual(&p.sample)?);
        max_adjoint = max_adjoint.max(p.shape.self_adjoint_defect);
        for (i, c) in p.curvatures().iter().enumerate() {
            for b in c.basis.column_iter() {
                let x: Vec<f64> = b.iter().copied().collect();
                max_sphere = max_sphere.max(curvature_sphere_residual(p, i, &x)?);
            }
        }
    }
    let dupin = match dupin_from_pencils(patch, pencils, &settings.analysis) {
        Ok(d) => {
            if d.skipped > 0 {
                warnings.push(format!("{} of {} points skipped in the Dupin test", d.skipped, d.points));
            }
            Some(d)
        }
        Err(Error::BranchMatching(u)) => {
            warnings.push(format!("no point admitted a stable branch matching (first at {u:?})"));
            None
        }
        Err(e) => return Err(e),
    };
    let lie_curvature = if constant && proper.g == 4 {
        let results = pencils.iter().map(pencil_lie_curvature).collect::<Result<Vec<_>>>()?;
        let (r_min, r_max) = results.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.r), hi.max(r.r)));
        Some(LieCurvatureSummary {
            r_min,
            r_max,
            canonical: results.iter().all(|r| r.canonical),
            pairing_available: results.iter().all(|r| r.pairing_available),
            ordering: results[0].ordering,
        })
    } else {
        None
    };
    if !proper.is_proper {
        warnings.push(format!("g varies over the grid ({}..={})", proper.g_min, proper.g_max));
    }
    let points = pencils
        .iter()
        .map(|p| PointSummary {
            u: p.u().to_vec(),
            kappas: p.kappas(),
            multiplicities: p.multiplicities(),
            ambiguous: p.decomposition.ambiguous,
        })
        .collect();
    Ok(CurvatureSection {
        g: proper.g,
        proper,
        multiplicities: constant.then_some(mults),
        kappa_ranges,
        max_self_adjoint_defect: max_adjoint,
        max_contact_residual: max_contact,
        contact_ok: max_contact <= LIFT_TOL,
        max_sphere_residual: max_sphere,
        spheres_ok: max_sphere <= SPHERE_TOL,
        dupin,
        lie_curvature,
        points,
    })
}

/// Locates the family carrying the curvature a construction added.
pub fn construction_check(c: &ConstructionRef, pencils: &[CurvaturePencil]) -> ConstructionCheck {
    let mut index: Option<Option<usize>> = None;
    let mut unmatched = 0;
    for p in pencils {
        let target = c.new_curvature(p.u());
        let found = p.curvatures().iter().position(|k| same_curvature(&k.kappa, &target, NEW_FAMILY_TOL));
        if found.is_none() {
            unmatched += 1;
        }
        index = match index {
            None => Some(found),
            Some(prev) if prev == found => Some(prev),
            Some(_) => Some(None),
        };
    }
    ConstructionCheck {
        kind: c.kind(),
        fiber_dim: c.fiber_dim(),
        new_family: index.flatten(),
        unmatched_points: unmatched,
        tol: NEW_FAMILY_TOL,
    }
}

/// Curvature, Dupin and Lie curvature analysis of a patch.
pub fn analyze(subject: &Subject, settings: &Settings) -> Result<AnalysisReport> {
    let sampled = sample(subject, settings)?;
    analyze_sampled(subject, &sampled, settings)
}

pub fn analyze_sampled(subject: &Subject, sampled: &Sampled, settings: &Settings) -> Result<AnalysisReport> {
    let mut warnings = Vec::new();
    let curvature = curvature_section(subject.patch.as_ref(), &sampled.pencils, settings, &mut warnings)?;
    Ok(AnalysisReport {
        tool: ToolInfo::default(),
        input: subject.input.clone(),
        patch: subject.patch.describe(),
        ambient: subject.patch.ambient().to_string(),
        grid: grid_info(sampled),
        seed: settings.seed,
        tolerances: settings.tolerances(),
        curvature,
        construction: subject.construction.as_ref().map(|c| construction_check(c, &sampled.pencils)),
        warnings,
    })
}

/// Verdicts computed from curvature sphere families alone.
#[derive(Debug, Clone)]
pub struct FamilyVerdicts {
    pub reducibility: ReducibilityVerdict,
    pub witness: Option<WitnessSearch>,
    pub immersion: Option<ImmersionSearch>,
    pub isoparametric: Verdict,
    pub warnings: Vec<String>,
}

pub fn classify_families(families: &[SphereMapSamples], settings: &Settings) -> Result<FamilyVerdicts> {
    let reducibility = reducibility_detect(families, settings.rank_tol, settings.signature_tol)?;
    let mut warnings = reducibility.warnings.clone();
    let witness = if families.len() == 4 {
        Some(isoparametric_witness(families, settings.witness_tol, true)?)
    } else {
        warnings.push(format!("witness search needs g = 4, found g = {}", families.len()));
        None
    };
    let isoparametric = witness.as_ref().map_or(Verdict::Inconclusive, |w| w.verdict);
    let immersion = match settings.immersion_opts() {
        Some(opts) => {
            let all: Vec<_> = families.iter().flat_map(|f| f.reps.iter().cloned()).collect();
            Some(find_immersing_transform(&all, &opts)?)
        }
        None => None,
    };
    Ok(FamilyVerdicts { reducibility, witness, immersion, isoparametric, warnings })
}

/// Reducibility, construction type, witness and immersion searches.
pub fn classify(subject: &Subject, settings: &Settings) -> Result<ClassificationReport> {
    let sampled = sample(subject, settings)?;
    let mut warnings = Vec::new();
    let curvature = curvature_section(subject.patch.as_ref(), &sampled.pencils, settings, &mut warnings)?;
    let construction = subject.construction.as_ref().map(|c| construction_check(c, &sampled.pencils));
    let mut report = ClassificationReport {
        tool: ToolInfo::default(),
        input: subject.input.clone(),
        patch: Some(subject.patch.describe()),
        grid: Some(grid_info(&sampled)),
        seed: settings.seed,
        tolerances: settings.tolerances(),
        curvature: None,
        construction,
        reducibility: None,
        new_family_span: None,
        necessary_conditions: None,
        witness: None,
        isoparametric: Verdict::Inconclusive,
        immersion: None,
        warnings,
    };
    let families = match families_from_pencils(&sampled.pencils) {
        Ok(f) => f,
        Err(e) => {
            report.warnings.push(format!("curvature sphere families are not well defined on the grid: {e}"));
            report.curvature = Some(curvature);
            return Ok(report);
        }
    };
    if curvature.g == 4 {
        let kappas: Vec<_> = sampled.pencils[0].curvatures().iter().map(|c| (c.kappa, c.multiplicity)).collect();
        report.necessary_conditions = Some(necessary_conditions(&kappas, LIE_CURVATURE_TOL)?);
    }
    let verdicts = classify_families(&families, settings)?;
    if let Some(i) = report.construction.as_ref().and_then(|c| c.new_family) {
        report.new_family_span = verdicts.reducibility.families.get(i).cloned();
    }
    report.curvature = Some(curvature);
    report.reducibility = Some(verdicts.reducibility);
    report.witness = verdicts.witness;
    report.isoparametric = verdicts.isoparametric;
    report.immersion = verdicts.immersion;
    report.warnings.extend(verdicts.warnings);
    Ok(report)
}

/// Classification of the planted synthetic families. Parameters `n`
/// (default 5), `samples` (64) and `conjugate` (0 or 1).
pub fn classify_synthetic(params: &ParamMap, settings: &Settings) -> Result<ClassificationReport> {
    params.expect_only(&["n", "samples", "conjugate"])?;
    let n = params.usize_or("n", 5)?;
    let samples = params.usize_or("samples", 64)?;
    let conjugate = params.get_or("conjugate", 0.0) != 0.0;
    let pencil = synthetic_isoparametric_pencil(settings.seed, n, samples, conjugate)?;
    let verdicts = classify_families(&pencil.families, settings)?;
    Ok(ClassificationReport {
        tool: ToolInfo::default(),
        input: InputDescriptor::named(SYNTHETIC, params.clone()),
        patch: None,
        grid: None,
        seed: settings.seed,
        tolerances: settings.tolerances(),
        curvature: None,
        construction: None,
        reducibility: Some(verdicts.reducibility),
        new_family_span: None,
        necessary_conditions: None,
        witness: verdicts.witness,
        isoparametric: verdicts.isoparametric,
        immersion: verdicts.immersion,
        warnings: verdicts.warnings,
    })
}

/// Dispatches on the generator name.
pub fn classify_input(input: InputDescriptor, settings: &Settings) -> Result<ClassificationReport> {
    if input.generator == SYNTHETIC {
        return classify_synthetic(&input.params, settings);
    }
    classify(&Subject::build(input)?, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::ConstructionTag;

    fn fast() -> Settings {
        Settings { immersion: Some(ImmersionOptions { starts: 8, steps: 20, ..Default::default() }), ..Settings::default() }
    }

    #[test]
    fn torus_analysis_is_proper_dupin() {
        let subject = Subject::build(InputDescriptor::named("torus", ParamMap::new())).unwrap();
        let settings = Settings { grid: Some(Grid::uniform(2, 16)), ..fast() };
        let r = analyze(&subject, &settings).unwrap();
        assert_eq!(r.curvature.g, 2);
        assert_eq!(r.curvature.multiplicities, Some(vec![1, 1]));
        assert!(r.curvature.dupin.as_ref().unwrap().is_dupin);
        assert!(r.curvature.contact_ok && r.curvature.spheres_ok);
        assert_eq!(r.grid.points, 256);
        assert!(r.construction.is_none());
    }

    #[test]
    fn construction_spec_matches_named_generator() {
        let spec = ConstructionSpec { kind: ConstructionKind::Cylinder, fiber_dim: 1, eps: None };
        let input = InputDescriptor { generator: "circle_profile".into(), params: ParamMap::new(), construction: Some(spec) };
        let settings = Settings { grid: Some(Grid::uniform(2, 12)), ..fast() };
        let a = classify_input(input, &settings).unwrap();
        let b = classify_input(InputDescriptor::named("cylinder_circle", ParamMap::new()), &settings).unwrap();
        let ca = a.construction.unwrap();
        assert_eq!(ca.new_family, b.construction.unwrap().new_family);
        assert_eq!(ca.unmatched_points, 0);
        let span = a.new_family_span.unwrap();
        assert_eq!(span.span_dim, 3);
        assert_eq!(a.reducibility.unwrap().reducible, Verdict::Yes);
        assert_ne!(span.construction, ConstructionTag::Unknown);
    }

    #[test]
    fn tube_without_radius_is_rejected() {
        let spec = ConstructionSpec { kind: ConstructionKind::Tube, fiber_dim: 1, eps: None };
        let input = InputDescriptor { generator: "circle_profile".into(), params: ParamMap::new(), construction: Some(spec) };
        assert!(matches!(Subject::build(input), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn synthetic_is_witnessed() {
        let r = classify_synthetic(&ParamMap::new(), &fast()).unwrap();
        assert_eq!(r.isoparametric, Verdict::Yes);
        assert_eq!(r.reducibility.unwrap().reducible, Verdict::No);
    }

    #[test]
    fn grid_dimension_is_checked() {
        let subject = Subject::build(InputDescriptor::named("torus", ParamMap::new())).unwrap();
        let settings = Settings { grid: Some(Grid::uniform(3, 4)), ..fast() };
        assert!(matches!(analyze(&subject, &settings), Err(Error::DimensionMismatch { .. })));
    }
}
