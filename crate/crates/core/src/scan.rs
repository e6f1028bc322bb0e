//! Parameter-space grid scans, CSV emission and ray bisection of region boundaries.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, ClassificationReport};
use crate::eig::DEFAULT_PSD_TOL;
use crate::error::{Error, Result};
use crate::map::{MapSpec, ScalingTriple};
use crate::spin::SpinLabel;

/// Bisection steps used by [`boundary_radius`].
pub const BOUNDARY_ITERATIONS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Pos,
    Cp,
    Ppt,
    Phi2Cp,
    Phi2Ppt,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Pos,
        Property::Cp,
        Property::Ppt,
        Property::Phi2Cp,
        Property::Phi2Ppt,
    ];

    /// CSV column name of the boolean.
    pub fn column(self) -> &'static str {
        match self {
            Property::Pos => "pos",
            Property::Cp => "cp",
            Property::Ppt => "ppt",
            Property::Phi2Cp => "phi2_cp",
            Property::Phi2Ppt => "phi2_ppt",
        }
    }

    /// CSV column name of the certificate eigenvalue, if the property has one.
    pub fn certificate_column(self) -> Option<&'static str> {
        match self {
            Property::Cp => Some("min_choi_eig"),
            Property::Ppt => Some("min_ptchoi_eig"),
            Property::Phi2Cp => Some("min_phi2_choi_eig"),
            Property::Pos | Property::Phi2Ppt => None,
        }
    }

    pub fn holds(self, r: &ClassificationReport) -> bool {
        match self {
            Property::Pos => r.positive_exact,
            Property::Cp => r.cp,
            Property::Ppt => r.ppt_both_signs,
            Property::Phi2Cp => r.phi2_cp,
            Property::Phi2Ppt => r.phi2_ppt,
        }
    }

    pub fn certificate(self, r: &ClassificationReport) -> Option<f64> {
        match self {
            Property::Cp => Some(r.min_choi_eig),
            Property::Ppt => Some(r.min_ptchoi_eig),
            Property::Phi2Cp => Some(r.min_phi2_choi_eig),
            Property::Pos | Property::Phi2Ppt => None,
        }
    }

    /// Parses a comma-separated list; returns the set in canonical column order.
    pub fn parse_list(s: &str) -> Result<Vec<Property>> {
        let mut props = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(Property::from_str)
            .collect::<Result<Vec<_>>>()?;
        if props.is_empty() {
            return Err(Error::InvalidArgument("empty property list".into()));
        }
        props.sort();
        props.dedup();
        Ok(props)
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "pos" => Ok(Property::Pos),
            "cp" => Ok(Property::Cp),
            "ppt" => Ok(Property::Ppt),
            "phi2cp" => Ok(Property::Phi2Cp),
            "phi2ppt" => Ok(Property::Phi2Ppt),
            _ => Err(Error::InvalidArgument(format!(
                "unknown property {s:?} (expected pos, cp, ppt, phi2cp, phi2ppt)"
            ))),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Phi2Cp => "phi2cp",
            Property::Phi2Ppt => "phi2ppt",
            p => p.column(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub spin: SpinLabel,
    pub range_min: f64,
    pub range_max: f64,
    /// Points per axis, endpoints included.
    pub steps: usize,
    pub properties: Vec<Property>,
    pub tol: f64,
    pub seed: u64,
}

impl ScanConfig {
    pub fn new(spin: SpinLabel) -> Self {
        Self {
            spin,
            range_min: -1.0,
            range_max: 1.0,
            steps: 41,
            properties: Property::ALL.to_vec(),
            tol: DEFAULT_PSD_TOL,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !self.range_min.is_finite()
            || !self.range_max.is_finite()
            || self.range_min >= self.range_max
        {
            return Err(Error::InvalidArgument(format!(
                "need finite range_min < range_max, got [{}, {}]",
                self.range_min, self.range_max
            )));
        }
        if self.properties.is_empty() {
            return Err(Error::InvalidArgument("no properties requested".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be >= 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vec<f64> {
        linspace(self.range_min, self.range_max, self.steps)
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut cols = vec!["lambda1", "lambda2", "lambda3"];
        let props = self.sorted_properties();
        cols.extend(props.iter().map(|p| p.column()));
        cols.extend(props.iter().filter_map(|p| p.certificate_column()));
        cols
    }

    fn sorted_properties(&self) -> Vec<Property> {
        let mut p = self.properties.clone();
        p.sort();
        p.dedup();
        p
    }
}

/// `n` evenly spaced points from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// One grid point: the lambda triple and the full report behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub lambdas: ScalingTriple,
    pub report: ClassificationReport,
}

impl ScanRecord {
    pub fn fields(&self, props: &[Property]) -> Vec<String> {
        let mut out: Vec<String> = self.lambdas.as_array().iter().map(f64::to_string).collect();
        out.extend(
            props
                .iter()
                .map(|p| if p.holds(&self.report) { "1" } else { "0" }.to_string()),
        );
        out.extend(
            props
                .iter()
                .filter_map(|p| p.certificate(&self.report))
                .map(|v| v.to_string()),
        );
        out
    }
}

/// Classifies every grid point, lambda1-major. `workers = 0` uses the rayon default.
/// Progress goes to standard error when `progress` is set.
pub fn run_scan(config: &ScanConfig, workers: usize, progress: bool) -> Result<Vec<ScanRecord>> {
    config.validate()?;
    let axis = config.axis();
    let n = axis.len();
    let total = n * n * n;
    let done = AtomicUsize::new(0);
    let tick = (total / 10).max(1);

    let work = || {
        (0..total)
            .into_par_iter()
            .map(|idx| {
                let l = ScalingTriple::new(axis[idx / (n * n)], axis[(idx / n) % n], axis[idx % n]);
                let report = classify(&MapSpec::new(config.spin, l), config.tol).map_err(|e| {
                    Error::AtPoint {
                        lambdas: l.to_string(),
                        source: Box::new(e),
                    }
                })?;
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if progress && finished.is_multiple_of(tick) {
                    eprintln!("scan: {finished}/{total} points");
                }
                Ok(ScanRecord { lambdas: l, report })
            })
            .collect::<Result<Vec<_>>>()
    };

    if workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?
            .install(work)
    }
}

pub fn write_csv<W: Write>(config: &ScanConfig, records: &[ScanRecord], out: W) -> Result<()> {
    let props = config.sorted_properties();
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("CSV write failed: {e}"));
    w.write_record(config.header()).map_err(io)?;
    for r in records {
        w.write_record(r.fields(&props)).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("CSV write failed: {e}")))
}

/// Checks that each requested boolean is invariant under coordinate permutations
/// combined with an even number of sign flips. Requires a grid symmetric about 0.
/// Returns the number of (point, symmetry) pairs that disagree.
pub fn symmetry_audit(config: &ScanConfig, records: &[ScanRecord]) -> Result<usize> {
    let axis = config.axis();
    let n = axis.len();
    if records.len() != n * n * n {
        return Err(Error::InvalidArgument(
            "record count does not match the grid".into(),
        ));
    }
    let symmetric = axis
        .iter()
        .zip(axis.iter().rev())
        .all(|(a, b)| (a + b).abs() <= 1e-12 * a.abs().max(1.0));
    if !symmetric {
        return Err(Error::InvalidArgument(
            "symmetry audit needs a grid symmetric about 0".into(),
        ));
    }
    let props = config.sorted_properties();
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let flips = [
        [false, false, false],
        [true, true, false],
        [true, false, true],
        [false, true, true],
    ];
    let at = |i: [usize; 3]| &records[i[0] * n * n + i[1] * n + i[2]];

    let mut violations = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let idx = [a, b, c];
                let base = at(idx);
                for perm in &perms {
                    for flip in &flips {
                        let mut img = [0; 3];
                        for k in 0..3 {
                            let i = idx[perm[k]];
                            img[k] = if flip[k] { n - 1 - i } else { i };
                        }
                        let other = at(img);
                        if props
                            .iter()
                            .any(|p| p.holds(&base.report) != p.holds(&other.report))
                        {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// Radius along a ray from the origin where `property` stops holding,
/// by bisection. Fails if the property is false at the origin or holds
/// out to radius 1024.
pub fn boundary_radius(
    spin: SpinLabel,
    direction: [f64; 3],
    property: Property,
    tol: f64,
) -> Result<f64> {
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::InvalidArgument(
            "direction must be a nonzero finite vector".into(),
        ));
    }
    let dir = direction.map(|x| x / norm);
    let holds = |r: f64| -> Result<bool> {
        let l = ScalingTriple::from(dir.map(|x| x * r));
        Ok(property.holds(&classify(&MapSpec::new(spin, l), tol)?))
    };
    if !holds(0.0)? {
        return Err(Error::PropertyFailsAtOrigin(property.to_string()));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while holds(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1024.0 {
            return Err(Error::InvalidArgument(format!(
                "{property} holds out to radius {lo}; no boundary"
            )));
        }
    }
    for _ in 0..BOUNDARY_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_includes_endpoints() {
        let g = linspace(-1.0, 1.0, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[10], 0.0);
        assert_eq!(g[20], 1.0);
        assert_eq!(linspace(0.0, 1.0, 2), vec![0.0, 1.0]);
    }

    #[test]
    fn property_parsing() {
        assert_eq!(
            Property::parse_list("phi2ppt,cp,pos,cp").unwrap(),
            vec![Property::Pos, Property::Cp, Property::Phi2Ppt]
        );
        assert_eq!("phi2_cp".parse::<Property>().unwrap(), Property::Phi2Cp);
        assert!(Property::parse_list("cp,eb").is_err());
        assert!(Property::parse_list("").is_err());
    }

    #[test]
    fn header_is_restricted() {
        let mut cfg = ScanConfig::new(SpinLabel::ONE);
        assert_eq!(
            cfg.header().join(","),
            "lambda1,lambda2,lambda3,pos,cp,ppt,phi2_cp,phi2_ppt,min_choi_eig,min_ptchoi_eig,min_phi2_choi_eig"
        );
        cfg.properties = vec![Property::Phi2Cp, Property::Pos];
        assert_eq!(
            cfg.header().join(","),
            "lambda1,lambda2,lambda3,pos,phi2_cp,min_phi2_choi_eig"
        );
    }

    #[test]
    fn config_validation() {
        let mut cfg = ScanConfig::new(SpinLabel::HALF);
        cfg.steps = 1;
        assert!(cfg.validate().is_err());
        cfg.steps = 2;
        cfg.range_min = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn boundary_examples() {
        let r = boundary_radius(SpinLabel::HALF, [1.0, 0.0, 0.0], Property::Ppt, 1e-9).unwrap();
        assert!((r - 1.0).abs() < 1e-6);
        let r = boundary_radius(SpinLabel::ONE, [1.0, 0.0, 0.0], Property::Pos, 1e-9).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-6);
        let r = boundary_radius(SpinLabel::ONE, [1.0, 1.0, 1.0], Property::Cp, 1e-9).unwrap();
        assert!((r - 2.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!(boundary_radius(SpinLabel::ONE, [0.0; 3], Property::Cp, 1e-9).is_err());
    }
}
