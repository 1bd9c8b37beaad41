//! Synthetic rotation datasets: the random, big-hole, and many-holes
//! distributions with fixed train/val/test quotas, neighborhood carving,
//! and the zeta difficulty metric.
//!
//! Rotations are drawn by sampling each Euler angle uniformly on
//! `[0, 360)` degrees. That is deliberately not Haar-uniform on the group
//! (use [`crate::so3::haar_random`] for that); it is the distribution the
//! datasets are defined with. Test samples must fall inside a rotation
//! neighborhood of some center, train/val samples must fall outside all of
//! them, and quotas are filled by per-index rejection sampling so that
//! generation is reproducible and order-independent.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::{Rng, RngExt};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::mat3::{self, Vec3};
use crate::rep::EulerZYX;
use crate::so3::{
    geodesic_angle, stream_key, Angle, RotationMatrix3, STREAM_CENTER, STREAM_DATASET,
};

/// Per-sample rejection budget before generation gives up.
pub const DEFAULT_ATTEMPT_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("rejection sampling exhausted {attempts} attempts for sample {sample_id} ({split})")]
    QuotaUnreachable {
        sample_id: u64,
        split: Split,
        attempts: u64,
    },
    #[error("point is not unit length (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("dataset has an empty {0} split")]
    EmptySplit(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which of the three designed distributions a dataset follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Random,
    BigHole,
    ManyHoles,
}

impl DistributionKind {
    pub fn tag(self) -> &'static str {
        match self {
            DistributionKind::Random => "random",
            DistributionKind::BigHole => "big-hole",
            DistributionKind::ManyHoles => "many-holes",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            DistributionKind::Random,
            DistributionKind::BigHole,
            DistributionKind::ManyHoles,
        ]
        .into_iter()
        .find(|k| k.tag() == tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn tag(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [Split::Train, Split::Val, Split::Test]
            .into_iter()
            .find(|s| s.tag() == tag)
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A fully resolved distribution: kind, neighborhood centers, and radius.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub centers: Vec<RotationMatrix3>,
    pub phi: Angle,
    pub seed: u64,
}

impl DistributionSpec {
    /// Train and test drawn from the same distribution; no carved region.
    pub fn random(seed: u64) -> Self {
        Self {
            kind: DistributionKind::Random,
            centers: Vec::new(),
            phi: Angle::from_degrees(0.0),
            seed,
        }
    }

    /// One 50-degree neighborhood around a uniformly random center drawn
    /// from the seed.
    pub fn big_hole(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(stream_key(seed, 0, STREAM_CENTER));
        let center = crate::so3::haar_rotation(&mut rng);
        Self {
            kind: DistributionKind::BigHole,
            centers: vec![center],
            phi: Angle::from_degrees(50.0),
            seed,
        }
    }

    /// Twenty 15-degree neighborhoods centered on the rotations that carry
    /// `(1, 0, 0)` to the 20 Fibonacci-spiral points.
    pub fn many_holes(seed: u64) -> Self {
        let centers = fibonacci_sphere(20)
            .into_iter()
            .map(|p| rotation_to_point(p).expect("fibonacci points are unit length"))
            .collect();
        Self {
            kind: DistributionKind::ManyHoles,
            centers,
            phi: Angle::from_degrees(15.0),
            seed,
        }
    }

    /// True iff `r` lies inside some neighborhood of this distribution.
    pub fn in_any_neighborhood(&self, r: &RotationMatrix3) -> bool {
        self.centers
            .iter()
            .any(|c| in_neighborhood(r, c, self.phi))
    }
}

/// Sample counts per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCounts {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl SplitCounts {
    pub fn total(&self) -> usize {
        self.train + self.val + self.test
    }
}

/// The 8000 / 2000 / 1000 layout used throughout.
impl Default for SplitCounts {
    fn default() -> Self {
        Self {
            train: 8000,
            val: 2000,
            test: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub id: u64,
    pub rotation: RotationMatrix3,
    pub split: Split,
}

#[derive(Debug, Clone)]
pub struct RotationDataset {
    pub spec: DistributionSpec,
    pub samples: Vec<Sample>,
}

/// Median distance to training set, in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zeta {
    pub degrees: f64,
}

/// Membership in the rotation neighborhood `rho(center, phi)`: geodesic
/// angle strictly below `phi`.
pub fn in_neighborhood(r: &RotationMatrix3, center: &RotationMatrix3, phi: Angle) -> bool {
    geodesic_angle(center, r).radians() < phi.radians()
}

/// `n` near-uniform unit vectors along the Fibonacci spiral:
/// `z_k = 1 - (2k + 1)/n`, longitude stepping by the golden angle.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    assert!(n >= 1, "need at least one point");
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let radius = (1.0 - z * z).max(0.0).sqrt();
            let phi = k as f64 * golden;
            [radius * phi.cos(), radius * phi.sin(), z]
        })
        .collect()
}

/// The minimal rotation carrying `(1, 0, 0)` to the unit vector `p`.
pub fn rotation_to_point(p: Vec3) -> Result<RotationMatrix3, DatasetError> {
    let norm = mat3::norm3(p);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(DatasetError::NotUnit { norm });
    }
    let e1 = [1.0, 0.0, 0.0];
    let axis = mat3::cross3(e1, p);
    let axis_norm = mat3::norm3(axis);
    let angle = mat3::dot3(e1, p).clamp(-1.0, 1.0).acos();
    if axis_norm <= 1e-12 {
        // p is (anti)parallel to e1: identity, or a half turn about y.
        if angle < std::f64::consts::FRAC_PI_2 {
            return Ok(RotationMatrix3::identity());
        }
        return Ok(RotationMatrix3::rot_y(std::f64::consts::PI));
    }
    let u = mat3::scale3(axis, angle / axis_norm);
    Ok(crate::rep::AxisAngle3::new(u).to_matrix())
}

/// One rotation from uniformly sampled Euler angles on `[0, 360)` degrees.
pub(crate) fn uniform_euler_rotation(rng: &mut impl Rng) -> RotationMatrix3 {
    let tau = std::f64::consts::TAU;
    let alpha = rng.random::<f64>() * tau;
    let beta = rng.random::<f64>() * tau;
    let gamma = rng.random::<f64>() * tau;
    EulerZYX::new(alpha, beta, gamma).to_matrix()
}

/// Generate a dataset: ids `0..total` with train ids first, then val, then
/// test. Every sample has its own RNG stream keyed by `(seed, id)`, so the
/// output is identical however the loop is scheduled.
pub fn generate_dataset(
    spec: &DistributionSpec,
    counts: SplitCounts,
) -> Result<RotationDataset, DatasetError> {
    generate_dataset_with_cap(spec, counts, DEFAULT_ATTEMPT_CAP)
}

pub fn generate_dataset_with_cap(
    spec: &DistributionSpec,
    counts: SplitCounts,
    attempt_cap: u64,
) -> Result<RotationDataset, DatasetError> {
    let carve = spec.kind != DistributionKind::Random;
    let mut samples = Vec::with_capacity(counts.total());
    for id in 0..counts.total() as u64 {
        let split = if (id as usize) < counts.train {
            Split::Train
        } else if (id as usize) < counts.train + counts.val {
            Split::Val
        } else {
            Split::Test
        };
        let mut rng = ChaCha8Rng::from_seed(stream_key(spec.seed, id, STREAM_DATASET));
        let mut accepted = None;
        for _ in 0..attempt_cap {
            let r = uniform_euler_rotation(&mut rng);
            let inside = carve && spec.in_any_neighborhood(&r);
            let ok = match split {
                Split::Test => !carve || inside,
                Split::Train | Split::Val => !inside,
            };
            if ok {
                accepted = Some(r);
                break;
            }
        }
        let rotation = accepted.ok_or(DatasetError::QuotaUnreachable {
            sample_id: id,
            split,
            attempts: attempt_cap,
        })?;
        samples.push(Sample {
            id,
            rotation,
            split,
        });
    }
    Ok(RotationDataset {
        spec: spec.clone(),
        samples,
    })
}

impl RotationDataset {
    pub fn split(&self, split: Split) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.split == split)
    }

    /// Median over the test split of the geodesic distance to the nearest
    /// training rotation, in degrees.
    pub fn zeta(&self) -> Result<Zeta, DatasetError> {
        let train: Vec<&Sample> = self.split(Split::Train).collect();
        let test: Vec<&Sample> = self.split(Split::Test).collect();
        if train.is_empty() {
            return Err(DatasetError::EmptySplit("train"));
        }
        if test.is_empty() {
            return Err(DatasetError::EmptySplit("test"));
        }
        let mut nearest: Vec<f64> = test
            .iter()
            .map(|t| {
                train
                    .iter()
                    .map(|tr| geodesic_angle(&t.rotation, &tr.rotation).radians())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        nearest.sort_by(|a, b| a.total_cmp(b));
        Ok(Zeta {
            degrees: median_of_sorted(&nearest).to_degrees(),
        })
    }

    /// Per-test-sample distance to the nearest training rotation, in degrees,
    /// in test-id order.
    pub fn nearest_train_distances(&self) -> Result<Vec<f64>, DatasetError> {
        let train: Vec<&Sample> = self.split(Split::Train).collect();
        if train.is_empty() {
            return Err(DatasetError::EmptySplit("train"));
        }
        Ok(self
            .split(Split::Test)
            .map(|t| {
                train
                    .iter()
                    .map(|tr| geodesic_angle(&t.rotation, &tr.rotation).degrees())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect())
    }
}

pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// 17-significant-digit float formatting: lossless for f64 and byte-stable
/// across platforms. All dataset and report files use it.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_flat9(r: &RotationMatrix3) -> String {
    let mut out = String::with_capacity(9 * 25);
    for (i, v) in r.to_flat().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out
}

/// Serialize as JSON Lines: a header record followed by one record per
/// sample.
pub fn write_dataset(ds: &RotationDataset, w: &mut impl Write) -> Result<(), DatasetError> {
    let mut header = String::new();
    write!(
        header,
        "{{\"kind\":\"{}\",\"phi_deg\":{},\"seed\":{},\"centers\":[",
        ds.spec.kind.tag(),
        fmt_f64(ds.spec.phi.degrees()),
        ds.spec.seed
    )
    .expect("write to string");
    for (i, c) in ds.spec.centers.iter().enumerate() {
        if i > 0 {
            header.push(',');
        }
        write!(header, "[{}]", fmt_flat9(c)).expect("write to string");
    }
    header.push_str("]}");
    writeln!(w, "{header}")?;
    for s in &ds.samples {
        writeln!(
            w,
            "{{\"id\":{},\"R\":[{}],\"split\":\"{}\"}}",
            s.id,
            fmt_flat9(&s.rotation),
            s.split.tag()
        )?;
    }
    Ok(())
}

pub fn save_dataset(ds: &RotationDataset, path: &Path) -> Result<(), DatasetError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_dataset(ds, &mut file)
}

#[derive(Deserialize)]
struct HeaderRecord {
    kind: String,
    phi_deg: f64,
    seed: u64,
    centers: Vec<[f64; 9]>,
}

#[derive(Deserialize)]
struct SampleRecord {
    id: u64,
    #[serde(rename = "R")]
    r: [f64; 9],
    split: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse {
        line,
        message: message.into(),
    }
}

/// Parse a dataset written by [`write_dataset`]. Errors carry the 1-based
/// line number of the offending record.
pub fn read_dataset(r: impl Read) -> Result<RotationDataset, DatasetError> {
    let mut lines = BufReader::new(r).lines().enumerate();
    let (_, header_line) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line"))?;
    let header: HeaderRecord = serde_json::from_str(&header_line?)
        .map_err(|e| parse_err(1, format!("bad header: {e}")))?;
    let kind = DistributionKind::from_tag(&header.kind)
        .ok_or_else(|| parse_err(1, format!("unknown distribution kind {:?}", header.kind)))?;
    let mut centers = Vec::with_capacity(header.centers.len());
    for flat in header.centers {
        centers.push(
            RotationMatrix3::from_flat(flat)
                .map_err(|e| parse_err(1, format!("bad center: {e}")))?,
        );
    }
    let spec = DistributionSpec {
        kind,
        centers,
        phi: Angle::from_degrees(header.phi_deg),
        seed: header.seed,
    };

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let record: SampleRecord = serde_json::from_str(&text)
            .map_err(|e| parse_err(line_no, format!("bad sample record: {e}")))?;
        let rotation = RotationMatrix3::from_flat(record.r)
            .map_err(|e| parse_err(line_no, format!("sample {}: {e}", record.id)))?;
        let split = Split::from_tag(&record.split)
            .ok_or_else(|| parse_err(line_no, format!("unknown split {:?}", record.split)))?;
        samples.push(Sample {
            id: record.id,
            rotation,
            split,
        });
    }
    Ok(RotationDataset { spec, samples })
}

pub fn load_dataset(path: &Path) -> Result<RotationDataset, DatasetError> {
    read_dataset(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn neighborhood_membership() {
        let center = RotationMatrix3::rot_x(0.4);
        assert!(in_neighborhood(&center, &center, Angle::from_degrees(1.0)));
        // 20 degrees away is outside a 15-degree neighborhood.
        let r = center.compose(&RotationMatrix3::rot_z(20f64.to_radians()));
        assert!(!in_neighborhood(&r, &center, Angle::from_degrees(15.0)));
        assert!(in_neighborhood(&r, &center, Angle::from_degrees(25.0)));
    }

    #[test]
    fn neighborhood_boundary_is_exclusive() {
        // phi set to the exact measured distance: strict < must reject.
        let center = RotationMatrix3::identity();
        let r = RotationMatrix3::rot_z(0.3);
        let phi = geodesic_angle(&center, &r);
        assert!(!in_neighborhood(&r, &center, phi));
    }

    #[test]
    fn fibonacci_small_cases() {
        // n = 1: z = 1 - 1/1 = 0, longitude 0.
        let pts = fibonacci_sphere(1);
        assert!(mat3::norm3(mat3::sub3(pts[0], [1.0, 0.0, 0.0])) < 1e-15);

        let pts = fibonacci_sphere(2);
        assert!((pts[0][2] - 0.5).abs() < 1e-15);
        assert!((pts[1][2] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci_sphere(20);
        for p in &pts {
            assert!((mat3::norm3(*p) - 1.0).abs() < 1e-12);
        }
        let mut min_sep = f64::INFINITY;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let cosang = mat3::dot3(pts[i], pts[j]).clamp(-1.0, 1.0);
                min_sep = min_sep.min(cosang.acos());
            }
        }
        assert!(
            min_sep.to_degrees() > 20.0,
            "closest pair only {:.2} degrees apart",
            min_sep.to_degrees()
        );
    }

    #[test]
    fn rotation_to_point_special_cases() {
        let r = rotation_to_point([1.0, 0.0, 0.0]).unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::identity()) < 1e-15);

        let r = rotation_to_point([0.0, 1.0, 0.0]).unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::rot_z(FRAC_PI_2)) < 1e-14);

        let r = rotation_to_point([-1.0, 0.0, 0.0]).unwrap();
        assert!(r.frobenius_distance(&RotationMatrix3::rot_y(std::f64::consts::PI)) < 1e-14);

        assert!(matches!(
            rotation_to_point([0.0, 2.0, 0.0]),
            Err(DatasetError::NotUnit { .. })
        ));
    }

    #[test]
    fn rotation_to_point_carries_e1() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1_000 {
            let v = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = mat3::norm3(v);
            if n < 1e-3 {
                continue;
            }
            let p = mat3::scale3(v, 1.0 / n);
            let r = rotation_to_point(p).unwrap();
            let carried = r.apply([1.0, 0.0, 0.0]);
            assert!(mat3::norm3(mat3::sub3(carried, p)) < 1e-9);
        }
    }

    #[test]
    fn generated_dataset_has_exact_splits() {
        let counts = SplitCounts {
            train: 80,
            val: 20,
            test: 10,
        };
        let ds = generate_dataset(&DistributionSpec::random(3), counts).unwrap();
        assert_eq!(ds.samples.len(), 110);
        assert_eq!(ds.split(Split::Train).count(), 80);
        assert_eq!(ds.split(Split::Val).count(), 20);
        assert_eq!(ds.split(Split::Test).count(), 10);
        // Ids are a partition.
        let mut ids: Vec<u64> = ds.samples.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 110);
    }

    #[test]
    fn big_hole_respects_neighborhood_discipline() {
        let counts = SplitCounts {
            train: 300,
            val: 60,
            test: 60,
        };
        let spec = DistributionSpec::big_hole(9);
        let ds = generate_dataset(&spec, counts).unwrap();
        let center = &spec.centers[0];
        for s in &ds.samples {
            let d = geodesic_angle(&s.rotation, center).degrees();
            match s.split {
                Split::Test => assert!(d < 50.0, "test sample at {d:.2} degrees"),
                _ => assert!(d >= 50.0, "{} sample at {d:.2} degrees", s.split),
            }
        }
    }

    #[test]
    fn many_holes_respects_neighborhood_discipline() {
        let counts = SplitCounts {
            train: 150,
            val: 30,
            test: 30,
        };
        let spec = DistributionSpec::many_holes(21);
        let ds = generate_dataset(&spec, counts).unwrap();
        for s in &ds.samples {
            let inside = spec.in_any_neighborhood(&s.rotation);
            match s.split {
                Split::Test => assert!(inside),
                _ => assert!(!inside),
            }
        }
    }

    #[test]
    fn unreachable_quota_is_reported() {
        // A vanishingly small neighborhood makes the test quota hopeless.
        let mut spec = DistributionSpec::big_hole(5);
        spec.phi = Angle::from_degrees(1e-3);
        let counts = SplitCounts {
            train: 2,
            val: 1,
            test: 1,
        };
        let err = generate_dataset_with_cap(&spec, counts, 500).unwrap_err();
        match err {
            DatasetError::QuotaUnreachable {
                split, attempts, ..
            } => {
                assert_eq!(split, Split::Test);
                assert_eq!(attempts, 500);
            }
            other => panic!("expected QuotaUnreachable, got {other:?}"),
        }
    }

    #[test]
    fn many_holes_centers_hit_fibonacci_points() {
        let spec = DistributionSpec::many_holes(1);
        let pts = fibonacci_sphere(20);
        assert_eq!(spec.centers.len(), 20);
        for (c, p) in spec.centers.iter().zip(&pts) {
            let carried = c.apply([1.0, 0.0, 0.0]);
            assert!(mat3::norm3(mat3::sub3(carried, *p)) < 1e-9);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let counts = SplitCounts {
            train: 40,
            val: 10,
            test: 10,
        };
        let spec = DistributionSpec::big_hole(77);
        let a = generate_dataset(&spec, counts).unwrap();
        let b = generate_dataset(&spec, counts).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        write_dataset(&a, &mut buf_a).unwrap();
        write_dataset(&b, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn zeta_of_identical_splits_is_zero() {
        let spec = DistributionSpec::random(4);
        let mut ds = generate_dataset(
            &spec,
            SplitCounts {
                train: 50,
                val: 0,
                test: 0,
            },
        )
        .unwrap();
        // Copy the train rotations into a test split.
        let copies: Vec<Sample> = ds
            .samples
            .iter()
            .map(|s| Sample {
                id: s.id + 1000,
                rotation: s.rotation,
                split: Split::Test,
            })
            .collect();
        ds.samples.extend(copies);
        assert_eq!(ds.zeta().unwrap().degrees, 0.0);
    }

    #[test]
    fn io_round_trip_preserves_bits() {
        let ds = generate_dataset(
            &DistributionSpec::many_holes(13),
            SplitCounts {
                train: 30,
                val: 10,
                test: 8,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let loaded = read_dataset(buf.as_slice()).unwrap();
        assert_eq!(loaded.samples.len(), ds.samples.len());
        for (a, b) in ds.samples.iter().zip(&loaded.samples) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.split, b.split);
            assert_eq!(a.rotation.to_flat(), b.rotation.to_flat());
        }
        assert_eq!(loaded.spec.kind, ds.spec.kind);
        assert_eq!(loaded.spec.seed, ds.spec.seed);
        for (a, b) in ds.spec.centers.iter().zip(&loaded.spec.centers) {
            assert_eq!(a.to_flat(), b.to_flat());
        }
    }

    #[test]
    fn truncated_record_names_its_line() {
        let ds = generate_dataset(
            &DistributionSpec::random(2),
            SplitCounts {
                train: 3,
                val: 1,
                test: 1,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let truncated: String = text.lines().take(4).collect::<Vec<_>>().join("\n")
            + "\n{\"id\":99,\"R\":[1.0,0.0";
        let err = read_dataset(truncated.as_bytes()).unwrap_err();
        match err {
            DatasetError::Parse { line, .. } => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_sample_list_round_trips() {
        let ds = RotationDataset {
            spec: DistributionSpec::random(0),
            samples: Vec::new(),
        };
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let loaded = read_dataset(buf.as_slice()).unwrap();
        assert!(loaded.samples.is_empty());
    }

    #[test]
    fn float_format_is_lossless() {
        for x in [
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -2.2250738585072014e-308,
        ] {
            let parsed: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits(), "{x} mangled");
        }
    }
}
