//! Bitstring preparation pipeline.
//!
//! 1. enumerate every `(2M−1)`-bit string in sorted order (`FullBitString`);
//! 2. generate the support strings of the cloner outputs for `|0⟩` and `|1⟩`
//!    (`GMBitString`);
//! 3. look each support string up in the full list, classify it by counting
//!    its ones, and attach its amplitude (`GMMatrix`).
//!
//! Outputs of `|0⟩` carry `M−1` ones and outputs of `|1⟩` carry `M` ones,
//! which is what makes the classification in step 3 unambiguous.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::binomial;
use crate::error::{Error, Result};
use crate::qubit::{BitString, Qubit, MAX_BITS};
use crate::state::StateVector;

/// Largest clone count for which the full enumeration is materialized.
pub const MAX_FULL_CLONES: usize = 12;

pub const FULL_BITSTRING_FILE: &str = "FullBitString.txt";
pub const GM_BITSTRING_FILE: &str = "GMBitString.txt";
pub const GM_MATRIX_FILE: &str = "GMMatrix.txt";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParityClass {
    CloneOf0,
    CloneOf1,
    NotGM,
}

impl ParityClass {
    /// The basis input whose output contains this string.
    pub fn input_bit(self) -> Option<bool> {
        match self {
            ParityClass::CloneOf0 => Some(false),
            ParityClass::CloneOf1 => Some(true),
            ParityClass::NotGM => None,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            ParityClass::CloneOf0 => "C0",
            ParityClass::CloneOf1 => "C1",
            ParityClass::NotGM => "NG",
        }
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One line of the `GMMatrix` stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmMatrixRecord {
    pub bits: BitString,
    pub coefficient: C64,
    pub parity_class: ParityClass,
}

/// Locations of the three stage files written by [`run_pipeline`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineArtifacts {
    pub full_path: PathBuf,
    pub gm_path: PathBuf,
    pub matrix_path: PathBuf,
}

fn register_width(clones: usize) -> Result<usize> {
    if clones == 0 {
        return Err(Error::Domain("number of clones must be at least 1".into()));
    }
    let width = 2 * clones - 1;
    if width > MAX_BITS {
        return Err(Error::ResourceLimit(format!(
            "{width}-bit registers are not representable"
        )));
    }
    Ok(width)
}

/// All `2^{2M−1}` strings in lexicographic order.
pub fn gen_full_bitstrings(clones: usize) -> Result<Vec<BitString>> {
    let width = register_width(clones)?;
    if clones > MAX_FULL_CLONES {
        return Err(Error::ResourceLimit(format!(
            "full enumeration for M = {clones} would hold 2^{width} strings (limit M = {MAX_FULL_CLONES})"
        )));
    }
    (0..1u64 << width).map(|i| BitString::from_index(width, i)).collect()
}

/// All `width`-bit values with exactly `weight` ones, ascending (Gosper's hack).
fn fixed_weight(width: usize, weight: usize) -> Vec<u64> {
    if weight > width {
        return Vec::new();
    }
    if weight == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial(width, weight) as usize);
    let mut v: u64 = (1 << weight) - 1;
    let limit = 1u64 << width;
    while v < limit {
        out.push(v);
        let lowest = v & v.wrapping_neg();
        let ripple = v + lowest;
        v = (((ripple ^ v) >> 2) / lowest) | ripple;
    }
    out
}

/// Support strings of the output for `|bit⟩`, generated directly from the
/// sector structure: for each `j`, clone sector with `j` flipped qubits and
/// anticlone sector with `j` flipped qubits relative to the anticlone of
/// `|bit⟩`.
pub fn gm_support(clones: usize, bit: bool) -> Result<Vec<BitString>> {
    let width = register_width(clones)?;
    let anti_bits = clones - 1;
    let mut out = Vec::new();
    for j in 0..clones {
        let (clone_ones, anti_ones) = if bit { (clones - j, j) } else { (j, anti_bits - j) };
        for c in fixed_weight(clones, clone_ones) {
            for a in fixed_weight(anti_bits, anti_ones) {
                out.push(BitString::from_index(width, (c << anti_bits) | a)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Sorted union of the supports of both basis outputs.
pub fn gen_gm_bitstrings(clones: usize) -> Result<Vec<BitString>> {
    let mut out = gm_support(clones, false)?;
    out.extend(gm_support(clones, true)?);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Classifies a string by its number of ones: `M−1` → clone of `|0⟩`,
/// `M` → clone of `|1⟩`.
pub fn parity_classify(bits: &BitString, clones: usize) -> Result<ParityClass> {
    let width = register_width(clones)?;
    if bits.len() != width {
        return Err(Error::Domain(format!(
            "bitstring {bits} has length {}, expected {width} for M = {clones}",
            bits.len()
        )));
    }
    let ones = bits.popcount() as usize;
    Ok(if ones + 1 == clones {
        ParityClass::CloneOf0
    } else if ones == clones {
        ParityClass::CloneOf1
    } else {
        ParityClass::NotGM
    })
}

/// Sign of the `±1` parity operator: `+1` for an even number of ones.
pub fn parity_eigenvalue(bits: &BitString) -> i8 {
    if bits.popcount().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Amplitude of `bits` in the output for `|bit⟩`, assembled from `γ_j`, the
/// multiplicities of the two symmetric factors and the phases carried by the
/// single-qubit factors.
fn basis_amplitude(bits: &BitString, clones: usize, bit: bool) -> Result<C64> {
    let anti_bits = clones - 1;
    let (clone_part, _) = bits.split(clones);
    let clone_ones = clone_part.count_ones() as usize;
    let j = if bit { clones - clone_ones } else { clone_ones };

    let psi = Qubit::basis(bit);
    let psi_perp = psi.perp();
    let anti = psi.anticlone();
    let anti_perp = anti.perp();
    // Each factor is a basis state up to phase; pick up that phase.
    let phase = |q: &Qubit| q.amplitude(true) + q.amplitude(false);
    let factor = phase(&psi).powu((clones - j) as u32)
        * phase(&psi_perp).powu(j as u32)
        * phase(&anti).powu((anti_bits - j) as u32)
        * phase(&anti_perp).powu(j as u32);
    // γ_j² / multiplicity is rational; one square root keeps it correctly
    // rounded. Adding +0 clears negative zeros left by the phases.
    let m = clones as f64;
    let multiplicity = binomial(clones, j) * binomial(anti_bits, j);
    let magnitude = (2.0 * (m - j as f64) / (m * (m + 1.0) * multiplicity)).sqrt();
    Ok(factor * magnitude + C64::new(0.0, 0.0))
}

/// Builds the `GMMatrix` records: every support string is located in the
/// sorted full enumeration by binary search, classified by parity and
/// assigned its amplitude.
pub fn assign_coefficients(clones: usize) -> Result<Vec<GmMatrixRecord>> {
    let full = gen_full_bitstrings(clones)?;
    let gm = gen_gm_bitstrings(clones)?;
    assign_coefficients_from(clones, &full, &gm)
}

/// [`assign_coefficients`] over stage lists already in memory.
pub fn assign_coefficients_from(clones: usize, full: &[BitString], gm: &[BitString]) -> Result<Vec<GmMatrixRecord>> {
    let mut records = Vec::with_capacity(gm.len());
    for bits in gm {
        if full.binary_search(bits).is_err() {
            return Err(Error::Consistency(format!(
                "support string {bits} missing from full enumeration"
            )));
        }
        let parity_class = parity_classify(bits, clones)?;
        let bit = parity_class
            .input_bit()
            .ok_or_else(|| Error::Consistency(format!("support string {bits} has no parity class")))?;
        records.push(GmMatrixRecord {
            bits: *bits,
            coefficient: basis_amplitude(bits, clones, bit)?,
            parity_class,
        });
    }
    records.sort_by_key(|r| r.bits);
    Ok(records)
}

/// Dense state of the requested class assembled from `GMMatrix` records.
pub fn assemble_state(records: &[GmMatrixRecord], clones: usize, bit: bool) -> Result<StateVector> {
    let width = register_width(clones)?;
    let mut state = StateVector::zeros(width)?;
    for r in records.iter().filter(|r| r.parity_class.input_bit() == Some(bit)) {
        if r.bits.len() != width {
            return Err(Error::Domain(format!("record {} does not match M = {clones}", r.bits)));
        }
        state.amplitudes_mut()[r.bits.index() as usize] = r.coefficient;
    }
    Ok(state)
}

/// Runs all three stages for `clones` and writes them into `dir`.
pub fn run_pipeline(clones: usize, dir: &Path) -> Result<(PipelineArtifacts, Vec<GmMatrixRecord>)> {
    let full = gen_full_bitstrings(clones)?;
    let gm = gen_gm_bitstrings(clones)?;
    let records = assign_coefficients_from(clones, &full, &gm)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let artifacts = PipelineArtifacts {
        full_path: dir.join(FULL_BITSTRING_FILE),
        gm_path: dir.join(GM_BITSTRING_FILE),
        matrix_path: dir.join(GM_MATRIX_FILE),
    };
    write_bitstrings(&artifacts.full_path, &full)?;
    write_bitstrings(&artifacts.gm_path, &gm)?;
    write_matrix(&artifacts.matrix_path, &records)?;
    Ok((artifacts, records))
}

/// Formats a float with 17 significant digits in scientific notation.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_lines(path: &Path, lines: impl Iterator<Item = String>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for line in lines {
        w.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// One bitstring per LF-terminated line.
pub fn write_bitstrings(path: &Path, strings: &[BitString]) -> Result<()> {
    write_lines(path, strings.iter().map(|b| b.to_string()))
}

/// `BITS<TAB>RE<TAB>IM<TAB>CLASS`, one record per line.
pub fn write_matrix(path: &Path, records: &[GmMatrixRecord]) -> Result<()> {
    if let Some(r) = records.iter().find(|r| r.parity_class == ParityClass::NotGM) {
        return Err(Error::Consistency(format!("record {} has no parity class", r.bits)));
    }
    write_lines(
        path,
        records.iter().map(|r| {
            format!(
                "{}\t{}\t{}\t{}",
                r.bits,
                format_f64(r.coefficient.re),
                format_f64(r.coefficient.im),
                r.parity_class
            )
        }),
    )
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if !text.is_empty() && !text.ends_with('\n') {
        let line = text.lines().count();
        return Err(Error::parse(path, line, "missing final line feed"));
    }
    Ok(text.lines().map(str::to_owned).collect())
}

fn parse_bits(path: &Path, line_no: usize, field: &str, width: usize) -> Result<BitString> {
    if field.len() != width {
        return Err(Error::parse(
            path,
            line_no,
            format!("bitstring {field:?} has length {}, expected {width}", field.len()),
        ));
    }
    field.parse().map_err(|_| {
        Error::parse(
            path,
            line_no,
            format!("bitstring {field:?} contains characters other than 0/1"),
        )
    })
}

fn check_sorted(path: &Path, line_no: usize, prev: Option<BitString>, cur: BitString) -> Result<()> {
    match prev {
        Some(p) if p >= cur => Err(Error::parse(path, line_no, format!("{cur} is not strictly after {p}"))),
        _ => Ok(()),
    }
}

/// Reads a `FullBitString` / `GMBitString` stage for register size `2M−1`.
pub fn read_bitstrings(path: &Path, clones: usize) -> Result<Vec<BitString>> {
    let width = register_width(clones)?;
    let mut out: Vec<BitString> = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let bits = parse_bits(path, i + 1, line, width)?;
        check_sorted(path, i + 1, out.last().copied(), bits)?;
        out.push(bits);
    }
    Ok(out)
}

/// Reads a `GMMatrix` stage for register size `2M−1`.
pub fn read_matrix(path: &Path, clones: usize) -> Result<Vec<GmMatrixRecord>> {
    let width = register_width(clones)?;
    let mut out: Vec<GmMatrixRecord> = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let bits = parse_bits(path, line_no, fields[0], width)?;
        let number = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(path, line_no, format!("unparseable number {s:?}")))
        };
        let coefficient = C64::new(number(fields[1])?, number(fields[2])?);
        let parity_class = match fields[3] {
            "C0" => ParityClass::CloneOf0,
            "C1" => ParityClass::CloneOf1,
            other => return Err(Error::parse(path, line_no, format!("unknown class {other:?}"))),
        };
        if parity_classify(&bits, clones)? != parity_class {
            return Err(Error::parse(
                path,
                line_no,
                format!(
                    "class {parity_class} contradicts the {} ones of {bits}",
                    bits.popcount()
                ),
            ));
        }
        check_sorted(path, line_no, out.last().map(|r| r.bits), bits)?;
        out.push(GmMatrixRecord {
            bits,
            coefficient,
            parity_class,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::build_gm_basis;

    fn strings(v: &[BitString]) -> Vec<String> {
        v.iter().map(|b| b.to_string()).collect()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn full_enumeration_examples() {
        assert_eq!(strings(&gen_full_bitstrings(1).unwrap()), ["0", "1"]);
        let two = gen_full_bitstrings(2).unwrap();
        assert_eq!(strings(&two), ["000", "001", "010", "011", "100", "101", "110", "111"]);
        assert_eq!(two.len(), 8);
        assert!(matches!(gen_full_bitstrings(13), Err(Error::ResourceLimit(_))));
        assert!(matches!(gen_full_bitstrings(0), Err(Error::Domain(_))));
    }

    #[test]
    fn gm_bitstring_examples() {
        assert_eq!(strings(&gen_gm_bitstrings(1).unwrap()), ["0", "1"]);
        let two = gen_gm_bitstrings(2).unwrap();
        assert_eq!(strings(&two), ["001", "010", "011", "100", "101", "110"]);
        assert!(two.iter().all(|b| matches!(b.popcount(), 1 | 2)));
    }

    #[test]
    fn gosper_matches_filter() {
        for width in 0..=10usize {
            for weight in 0..=width + 1 {
                let expect: Vec<u64> = (0..1u64 << width)
                    .filter(|v| v.count_ones() as usize == weight)
                    .collect();
                assert_eq!(fixed_weight(width, weight), expect, "width {width} weight {weight}");
            }
        }
    }

    #[test]
    fn support_matches_builder() {
        for m in 1..=8usize {
            for bit in [false, true] {
                let built = build_gm_basis(m, bit).unwrap().support(1e-12);
                let generated: Vec<u64> = gm_support(m, bit).unwrap().iter().map(|b| b.index()).collect();
                assert_eq!(generated, built, "M={m} bit={bit}");
            }
        }
    }

    #[test]
    fn parity_classify_examples() {
        assert_eq!(parity_classify(&bs("001"), 2).unwrap(), ParityClass::CloneOf0);
        assert_eq!(parity_classify(&bs("110"), 2).unwrap(), ParityClass::CloneOf1);
        assert_eq!(parity_classify(&bs("000"), 2).unwrap(), ParityClass::NotGM);
        assert!(matches!(parity_classify(&bs("00"), 2), Err(Error::Domain(_))));
    }

    // For fixed M the two classes have ones-counts M−1 and M, so the ±1
    // parity operator separates them as well.
    #[test]
    fn parity_operator_separates_classes() {
        for m in 1..=10usize {
            for b in gen_gm_bitstrings(m).unwrap() {
                let class = parity_classify(&b, m).unwrap();
                let expect = if (m - 1) % 2 == 0 { 1 } else { -1 };
                let eig = parity_eigenvalue(&b);
                match class {
                    ParityClass::CloneOf0 => assert_eq!(eig, expect),
                    ParityClass::CloneOf1 => assert_eq!(eig, -expect),
                    ParityClass::NotGM => panic!("{b} unclassified"),
                }
            }
        }
    }

    #[test]
    fn assign_coefficients_examples() {
        let one = assign_coefficients(1).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(
            (one[0].bits, one[0].coefficient, one[0].parity_class),
            (bs("0"), C64::new(1.0, 0.0), ParityClass::CloneOf0)
        );
        assert_eq!(
            (one[1].bits, one[1].coefficient, one[1].parity_class),
            (bs("1"), C64::new(1.0, 0.0), ParityClass::CloneOf1)
        );

        let two = assign_coefficients(2).unwrap();
        let find = |s: &str| two.iter().find(|r| r.bits == bs(s)).copied().unwrap();
        let r001 = find("001");
        assert!((r001.coefficient - C64::new((2.0f64 / 3.0).sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(r001.parity_class, ParityClass::CloneOf0);
        // perp(|0⟩) = −|1⟩ puts a minus sign on the j = 1 sector.
        let r010 = find("010");
        assert!((r010.coefficient - C64::new(-1.0 / 6.0f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(r010.parity_class, ParityClass::CloneOf0);
    }

    #[test]
    fn missing_support_string_is_an_internal_error() {
        let full: Vec<BitString> = gen_full_bitstrings(2)
            .unwrap()
            .into_iter()
            .filter(|b| b.index() != 0b010)
            .collect();
        let gm = gen_gm_bitstrings(2).unwrap();
        assert!(matches!(
            assign_coefficients_from(2, &full, &gm),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn pipeline_matches_builder() {
        for m in 1..=8usize {
            let records = assign_coefficients(m).unwrap();
            for bit in [false, true] {
                let assembled = assemble_state(&records, m, bit).unwrap();
                let built = build_gm_basis(m, bit).unwrap();
                assert!(assembled.distance(&built) < 1e-12, "M={m} bit={bit}");
            }
        }
    }

    #[test]
    fn stage_files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let (art, records) = run_pipeline(2, dir.path()).unwrap();
        assert_eq!(
            read_bitstrings(&art.full_path, 2).unwrap(),
            gen_full_bitstrings(2).unwrap()
        );
        assert_eq!(read_bitstrings(&art.gm_path, 2).unwrap(), gen_gm_bitstrings(2).unwrap());
        let back = read_matrix(&art.matrix_path, 2).unwrap();
        assert_eq!(back.len(), 6);
        for (a, b) in back.iter().zip(&records) {
            assert_eq!(a.bits, b.bits);
            assert!((a.coefficient - b.coefficient).norm() <= 1e-15);
        }
        let text = fs::read_to_string(&art.matrix_path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "001\t8.1649658092772603e-1\t0.0000000000000000e0\tC0"
        );
    }

    #[test]
    fn malformed_lines_name_their_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.txt");
        fs::write(&p, "000\n00\n").unwrap();
        match read_bitstrings(&p, 2) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        fs::write(&p, "0a1\n").unwrap();
        assert!(matches!(read_bitstrings(&p, 2), Err(Error::Parse { line: 1, .. })));
        fs::write(&p, "001\n000\n").unwrap();
        assert!(matches!(read_bitstrings(&p, 2), Err(Error::Parse { line: 2, .. })));
        fs::write(&p, "001\t0.5\tx\tC0\n").unwrap();
        assert!(matches!(read_matrix(&p, 2), Err(Error::Parse { line: 1, .. })));
        fs::write(&p, "001\t0.5\t0\tC1\n").unwrap();
        assert!(matches!(read_matrix(&p, 2), Err(Error::Parse { line: 1, .. })));
        fs::write(&p, "001\t0.5\t0\n").unwrap();
        assert!(matches!(read_matrix(&p, 2), Err(Error::Parse { line: 1, .. })));
    }
}
