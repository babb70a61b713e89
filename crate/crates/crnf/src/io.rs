//! Versioned JSON file formats for surfaces, maps, polynomials, and reports.
//!
//! Every numeric field travels as an exact rational string ("p/q" or an
//! integer string), never through floating point. Invariants:
//!
//! - parse then serialize is the identity on canonical files; serializing
//!   always produces canonical files (terms sorted by total degree then
//!   z-exponent, zero coefficients and duplicate exponent pairs absent)
//! - serialization is deterministic byte-for-byte for equal inputs
//! - every format carries a version tag ("cr-surface/1" etc.) checked on
//!   parse

use crate::error::{Error, Result};
use crate::map::TangentIdentityMap;
use crate::normalize::NormalizeReport;
use crate::poly::BiPoly;
use crate::scalar::ExactScalar;
use crate::surface::{ModelPolynomial, SurfaceJet};
use crate::wjet::WJet;
use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

/// Format tag for surface files.
pub const SURFACE_FORMAT: &str = "cr-surface/1";
/// Format tag for transformation files.
pub const MAP_FORMAT: &str = "cr-map/1";
/// Format tag for bare polynomial files.
pub const POLY_FORMAT: &str = "cr-poly/1";
/// Format tag for normalization reports.
pub const REPORT_FORMAT: &str = "cr-report/1";

/// Parses an exact rational from "p/q" or an integer string.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let malformed = || Error::InvalidInput(format!("malformed rational {:?}", text));
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer_text.trim()).map_err(|_| malformed())?;
    let denom = BigInt::from_str(denom_text.trim()).map_err(|_| malformed())?;
    if denom.is_zero() {
        return Err(Error::InvalidInput(format!(
            "zero denominator in rational {:?}",
            text
        )));
    }
    Ok(BigRational::new(numer, denom))
}

/// Serializes a rational canonically: integer string or "p/q" in lowest terms.
pub fn rational_string(value: &BigRational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A complex scalar as a pair of rational strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScalarRecord {
    /// Real part.
    pub re: String,
    /// Imaginary part.
    pub im: String,
}

impl ScalarRecord {
    /// Canonical record for a scalar.
    pub fn from_scalar(value: &ExactScalar) -> ScalarRecord {
        ScalarRecord {
            re: rational_string(value.re()),
            im: rational_string(value.im()),
        }
    }

    /// Parses both parts exactly.
    pub fn to_scalar(&self) -> Result<ExactScalar> {
        Ok(ExactScalar::new(
            parse_rational(&self.re)?,
            parse_rational(&self.im)?,
        ))
    }
}

/// One monomial coefficient in (z, zbar) exponents.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermRecord {
    /// z exponent.
    pub m: u32,
    /// zbar exponent.
    pub n: u32,
    /// Real part of the coefficient.
    pub re: String,
    /// Imaginary part of the coefficient.
    pub im: String,
}

/// One monomial coefficient in (z, w) exponents of a map component.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapTermRecord {
    /// z exponent.
    pub k: u32,
    /// w exponent.
    pub l: u32,
    /// Real part of the coefficient.
    pub re: String,
    /// Imaginary part of the coefficient.
    pub im: String,
}

/// A surface jet: model and tail coefficient lists.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SurfaceFile {
    /// Always [`SURFACE_FORMAT`].
    pub format: String,
    /// Singularity degree.
    pub k0: u32,
    /// Truncation order.
    pub degree: u32,
    /// Terms of the model polynomial.
    pub model: Vec<TermRecord>,
    /// Terms of the tail.
    pub tail: Vec<TermRecord>,
}

/// A tangent-to-identity transformation: f and g coefficient lists.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapFile {
    /// Always [`MAP_FORMAT`].
    pub format: String,
    /// Singularity degree the map is graded against.
    pub k0: u32,
    /// Terms of the z-component perturbation.
    pub f: Vec<MapTermRecord>,
    /// Terms of the w-component perturbation.
    pub g: Vec<MapTermRecord>,
}

/// A bare polynomial in (z, zbar).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyFile {
    /// Always [`POLY_FORMAT`].
    pub format: String,
    /// Terms of the polynomial.
    pub terms: Vec<TermRecord>,
}

/// Invariants block of a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantsRecord {
    /// Leading zbar-pure degree.
    pub s: u32,
    /// Model division invariant.
    pub alpha: ScalarRecord,
}

/// Per-degree summary in a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeSummaryRecord {
    /// The degree.
    pub degree: u32,
    /// Number of w-component unknowns available.
    pub g_unknowns: usize,
    /// Number of z-component unknowns available.
    pub f_unknowns: usize,
    /// True when no work was needed.
    pub residual_was_zero: bool,
}

/// One resonance event in a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResonanceEventRecord {
    /// Target degree.
    pub degree: u32,
    /// Corrective family, "A" or "B".
    pub case: String,
    /// Family index.
    pub t: u32,
    /// Solved corrective parameter.
    pub a: ScalarRecord,
}

/// One truncation-boundary pin in a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundaryEventRecord {
    /// Corrective family, "A" or "B".
    pub case: String,
    /// Family index.
    pub t: u32,
    /// Lowest degree the family moves.
    pub first_degree: u32,
    /// Designated target degree, beyond the order.
    pub target_degree: u32,
    /// Jointly solved pin parameter.
    pub a: ScalarRecord,
    /// True when the family does not move the jet.
    pub inert: bool,
    /// True when the family's gauge freedom was spent.
    pub pinned: bool,
}

/// Ambiguity resolutions recorded for auditing.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConventionsRecord {
    /// How the division chain recursion is read.
    pub chain_reading: String,
    /// Which pure coefficient the membership conditions leave free.
    pub top_zbar_exclusion: String,
    /// Where the multiple-of-s resonance targets start.
    pub resonance_start: String,
    /// How diagonal scalings act on the conjugate variable.
    pub scaling_reading: String,
}

/// Machine-readable audit of a normalization run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportFile {
    /// Always [`REPORT_FORMAT`].
    pub format: String,
    /// Singularity degree.
    pub k0: u32,
    /// Truncation order.
    pub degree: u32,
    /// Computed invariants.
    pub invariants: InvariantsRecord,
    /// One entry per pass-1 degree.
    pub per_degree: Vec<DegreeSummaryRecord>,
    /// One entry per resonance event.
    pub resonance_events: Vec<ResonanceEventRecord>,
    /// One entry per truncation-boundary family.
    pub boundary_events: Vec<BoundaryEventRecord>,
    /// Convention audit strings.
    pub conventions: ConventionsRecord,
    /// Exit status the producing command reported.
    pub exit_status: i32,
}

fn sorted_terms(poly: &BiPoly) -> Vec<TermRecord> {
    let mut terms: Vec<(&(u32, u32), &ExactScalar)> = poly.terms().collect();
    terms.sort_by_key(|(&(m, n), _)| (m + n, m));
    terms
        .into_iter()
        .map(|(&(m, n), coeff)| TermRecord {
            m,
            n,
            re: rational_string(coeff.re()),
            im: rational_string(coeff.im()),
        })
        .collect()
}

fn poly_from_records(records: &[TermRecord], what: &str) -> Result<BiPoly> {
    let mut seen = BTreeSet::new();
    let mut poly = BiPoly::zero();
    for record in records {
        if !seen.insert((record.m, record.n)) {
            return Err(Error::InvalidInput(format!(
                "duplicate {} term ({}, {})",
                what, record.m, record.n
            )));
        }
        let coeff = ExactScalar::new(parse_rational(&record.re)?, parse_rational(&record.im)?);
        poly.add_to_coeff(record.m, record.n, &coeff);
    }
    Ok(poly)
}

fn sorted_map_terms(jet: &WJet) -> Vec<MapTermRecord> {
    let mut terms: Vec<(&(u32, u32), &ExactScalar)> = jet.terms().collect();
    terms.sort_by_key(|(&(k, l), _)| (k + l, k));
    terms
        .into_iter()
        .map(|(&(k, l), coeff)| MapTermRecord {
            k,
            l,
            re: rational_string(coeff.re()),
            im: rational_string(coeff.im()),
        })
        .collect()
}

fn wjet_from_records(records: &[MapTermRecord], what: &str) -> Result<WJet> {
    let mut seen = BTreeSet::new();
    let mut jet = WJet::zero();
    for record in records {
        if !seen.insert((record.k, record.l)) {
            return Err(Error::InvalidInput(format!(
                "duplicate {} term ({}, {})",
                what, record.k, record.l
            )));
        }
        let coeff = ExactScalar::new(parse_rational(&record.re)?, parse_rational(&record.im)?);
        jet.add_to_coeff(record.k, record.l, &coeff);
    }
    Ok(jet)
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::InvalidInput(format!(
            "expected format {:?}, found {:?}",
            expected, found
        )));
    }
    Ok(())
}

/// Canonical file for a surface jet.
pub fn surface_to_file(surface: &SurfaceJet) -> SurfaceFile {
    SurfaceFile {
        format: SURFACE_FORMAT.to_string(),
        k0: surface.k0(),
        degree: surface.order(),
        model: sorted_terms(surface.model().poly()),
        tail: sorted_terms(surface.tail()),
    }
}

/// Validates and rebuilds a surface jet from its file form.
pub fn surface_from_file(file: &SurfaceFile) -> Result<SurfaceJet> {
    check_format(&file.format, SURFACE_FORMAT)?;
    let model = ModelPolynomial::new(poly_from_records(&file.model, "model")?, file.k0)?;
    let tail = poly_from_records(&file.tail, "tail")?;
    SurfaceJet::new(model, file.degree, tail)
}

/// Canonical file for a transformation.
pub fn map_to_file(map: &TangentIdentityMap) -> MapFile {
    MapFile {
        format: MAP_FORMAT.to_string(),
        k0: map.k0(),
        f: sorted_map_terms(map.f()),
        g: sorted_map_terms(map.g()),
    }
}

/// Validates and rebuilds a transformation from its file form.
pub fn map_from_file(file: &MapFile) -> Result<TangentIdentityMap> {
    check_format(&file.format, MAP_FORMAT)?;
    let f = wjet_from_records(&file.f, "f")?;
    let g = wjet_from_records(&file.g, "g")?;
    TangentIdentityMap::new(file.k0, f, g)
}

/// Canonical file for a bare polynomial.
pub fn poly_to_file(poly: &BiPoly) -> PolyFile {
    PolyFile {
        format: POLY_FORMAT.to_string(),
        terms: sorted_terms(poly),
    }
}

/// Validates and rebuilds a polynomial from its file form.
pub fn poly_from_file(file: &PolyFile) -> Result<BiPoly> {
    check_format(&file.format, POLY_FORMAT)?;
    poly_from_records(&file.terms, "polynomial")
}

/// Canonical report file for a completed normalization.
pub fn report_to_file(report: &NormalizeReport, exit_status: i32) -> ReportFile {
    ReportFile {
        format: REPORT_FORMAT.to_string(),
        k0: report.k0,
        degree: report.order,
        invariants: InvariantsRecord {
            s: report.s,
            alpha: ScalarRecord::from_scalar(&report.alpha),
        },
        per_degree: report
            .degrees
            .iter()
            .map(|d| DegreeSummaryRecord {
                degree: d.degree,
                g_unknowns: d.g_unknowns,
                f_unknowns: d.f_unknowns,
                residual_was_zero: d.residual_was_zero,
            })
            .collect(),
        resonance_events: report
            .resonances
            .iter()
            .map(|r| ResonanceEventRecord {
                degree: r.degree,
                case: r.case.to_string(),
                t: r.t,
                a: ScalarRecord::from_scalar(&r.parameter),
            })
            .collect(),
        boundary_events: report
            .boundaries
            .iter()
            .map(|b| BoundaryEventRecord {
                case: b.case.to_string(),
                t: b.t,
                first_degree: b.first_degree,
                target_degree: b.target_degree,
                a: ScalarRecord::from_scalar(&b.parameter),
                inert: b.inert,
                pinned: b.pinned,
            })
            .collect(),
        conventions: ConventionsRecord {
            chain_reading: report.conventions.chain_reading.to_string(),
            top_zbar_exclusion: report.conventions.top_zbar_exclusion.to_string(),
            resonance_start: report.conventions.resonance_start.to_string(),
            scaling_reading: report.conventions.scaling_reading.to_string(),
        },
        exit_status,
    }
}

/// Pretty JSON with a trailing newline; deterministic for equal values.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Reads and validates a surface file.
pub fn read_surface(path: &Path) -> Result<SurfaceJet> {
    let text = std::fs::read_to_string(path)?;
    surface_from_file(&serde_json::from_str(&text)?)
}

/// Writes a surface canonically.
pub fn write_surface(path: &Path, surface: &SurfaceJet) -> Result<()> {
    std::fs::write(path, to_json_string(&surface_to_file(surface))?)?;
    Ok(())
}

/// Reads and validates a map file.
pub fn read_map(path: &Path) -> Result<TangentIdentityMap> {
    let text = std::fs::read_to_string(path)?;
    map_from_file(&serde_json::from_str(&text)?)
}

/// Writes a map canonically.
pub fn write_map(path: &Path, map: &TangentIdentityMap) -> Result<()> {
    std::fs::write(path, to_json_string(&map_to_file(map))?)?;
    Ok(())
}

/// Reads and validates a polynomial file.
pub fn read_poly(path: &Path) -> Result<BiPoly> {
    let text = std::fs::read_to_string(path)?;
    poly_from_file(&serde_json::from_str(&text)?)
}

/// Writes a polynomial canonically.
pub fn write_poly(path: &Path, poly: &BiPoly) -> Result<()> {
    std::fs::write(path, to_json_string(&poly_to_file(poly))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::normalize;

    fn sc(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn sample_surface() -> SurfaceJet {
        let model = ModelPolynomial::standard(3).unwrap();
        let mut tail = BiPoly::monomial(0, 4, sc(1));
        tail.add_to_coeff(3, 1, &ExactScalar::from_parts(1, 2, -3, 1));
        SurfaceJet::new(model, 8, tail).unwrap()
    }

    #[test]
    fn rational_parsing_is_exact_and_canonical() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-7").unwrap(), BigRational::from_integer((-7).into()));
        assert_eq!(parse_rational(" 4 / 6 ").unwrap(), BigRational::new(2.into(), 3.into()));
        assert_eq!(parse_rational("3/-6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.5").is_err());
        assert_eq!(rational_string(&parse_rational("-10/4").unwrap()), "-5/2");
    }

    #[test]
    fn surface_round_trips_exactly() {
        let surface = sample_surface();
        let file = surface_to_file(&surface);
        let json = to_json_string(&file).unwrap();
        let reparsed: SurfaceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(reparsed, file);
        let rebuilt = surface_from_file(&reparsed).unwrap();
        assert_eq!(rebuilt, surface);
    }

    #[test]
    fn terms_are_sorted_by_total_degree_then_z_exponent() {
        let file = surface_to_file(&sample_surface());
        let keys: Vec<(u32, u32)> = file.tail.iter().map(|t| (t.m, t.n)).collect();
        assert_eq!(keys, vec![(0, 4), (3, 1)]);
        let model_keys: Vec<(u32, u32)> = file.model.iter().map(|t| (t.m, t.n)).collect();
        assert_eq!(model_keys, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn duplicate_terms_are_rejected() {
        let mut file = surface_to_file(&sample_surface());
        let copy = file.tail[0].clone();
        file.tail.push(copy);
        match surface_from_file(&file) {
            Err(Error::InvalidInput(message)) => assert!(message.contains("duplicate")),
            other => panic!("expected duplicate rejection, got {:?}", other),
        }
    }

    #[test]
    fn format_tags_are_checked() {
        let mut file = surface_to_file(&sample_surface());
        file.format = "cr-surface/2".to_string();
        assert!(surface_from_file(&file).is_err());
    }

    #[test]
    fn map_round_trips_including_low_order_f_term() {
        let mut f = WJet::monomial(0, 1, ExactScalar::from_ratio(3, 2));
        f.add_to_coeff(3, 0, &sc(-1));
        let g = WJet::monomial(0, 2, ExactScalar::i());
        let map = TangentIdentityMap::new(3, f, g).unwrap();
        let file = map_to_file(&map);
        let rebuilt = map_from_file(&file).unwrap();
        assert_eq!(rebuilt.f(), map.f());
        assert_eq!(rebuilt.g(), map.g());
    }

    #[test]
    fn serialization_is_byte_stable() {
        let surface = sample_surface();
        let a = to_json_string(&surface_to_file(&surface)).unwrap();
        let b = to_json_string(&surface_to_file(&surface.clone())).unwrap();
        assert_eq!(a, b);
        let result = normalize(&surface).unwrap();
        let ra = to_json_string(&report_to_file(&result.report, 0)).unwrap();
        let rb = to_json_string(&report_to_file(&normalize(&surface).unwrap().report, 0)).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn report_captures_resonance_events() {
        let result = normalize(&sample_surface()).unwrap();
        let report = report_to_file(&result.report, 0);
        assert_eq!(report.invariants.s, 4);
        assert_eq!(report.invariants.alpha.re, "3/2");
        let degrees: Vec<u32> = report.resonance_events.iter().map(|e| e.degree).collect();
        assert_eq!(degrees, vec![6, 8]);
        assert!(report.per_degree.iter().any(|d| !d.residual_was_zero));
        let boundary = &report.boundary_events[0];
        assert_eq!((boundary.case.as_str(), boundary.t), ("A", 2));
        assert_eq!((boundary.first_degree, boundary.target_degree), (8, 10));
        assert!(boundary.pinned);
    }

    #[test]
    fn poly_file_round_trips() {
        let mut poly = BiPoly::monomial(2, 1, sc(1));
        poly.add_to_coeff(1, 2, &ExactScalar::from_ratio(-1, 2));
        let rebuilt = poly_from_file(&poly_to_file(&poly)).unwrap();
        assert_eq!(rebuilt, poly);
    }
}
