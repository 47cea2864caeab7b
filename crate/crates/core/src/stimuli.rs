//! Generators for the distance, area and direction tasks.
//!
//! Every task carries enough coordinates to recompute its own ground truth
//! and difficulty parameters; [`Stimulus::oracle_answer`] never looks at
//! generator internals.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng;
use crate::scene::SceneKind;
use crate::sphere::{
    cross_track_distance, destination, great_circle_distance, initial_bearing, midpoint, uniform_sphere_sample,
    GeoCoord, GeometryError, SphericalPolygon,
};

/// Rejection budget for one task.
pub const MAX_ATTEMPTS: usize = 10_000;

/// Pair distances of the distance task are drawn from this range, degrees.
pub const PAIR_DISTANCE_RANGE: (f64, f64) = (40.0, 60.0);
/// Centre separations, degrees.
pub const CLOSE_SEPARATION: f64 = 60.0;
pub const FAR_SEPARATION: f64 = 120.0;
/// Area-task vertex distance from the polygon centre, degrees.
pub const POLYGON_RADIUS: f64 = 8.0;
pub const POLYGON_VERTICES: usize = 8;
/// Minimum central angle between adjacent polygon vertices, degrees.
pub const MIN_VERTEX_GAP: f64 = 30.0;
/// Cross-track distance below which a direction target counts as hit.
pub const HIT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum StimulusError {
    #[error("no valid task found after {0} attempts")]
    GenerationExhausted(usize),
    #[error("difficulty {0:?} does not apply to the {1:?} task")]
    InvalidDifficulty(Difficulty, TaskFamily),
    #[error("accuracy needs at least one response")]
    EmptySample,
    #[error("{correct} correct out of {total} responses")]
    CountExceedsTotal { correct: usize, total: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TaskFamily {
    Distance,
    Area,
    Direction,
}

impl TaskFamily {
    /// Fixed presentation order.
    pub const ORDER: [TaskFamily; 3] = [TaskFamily::Distance, TaskFamily::Area, TaskFamily::Direction];

    pub fn name(&self) -> &'static str {
        match self {
            TaskFamily::Distance => "distance",
            TaskFamily::Area => "area",
            TaskFamily::Direction => "direction",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ORDER.into_iter().find(|f| f.name() == s)
    }

    pub fn difficulties(&self) -> &'static [Difficulty] {
        match self {
            TaskFamily::Distance | TaskFamily::Area => {
                &[Difficulty::Easy, Difficulty::SmallVariation, Difficulty::FarDistance]
            }
            TaskFamily::Direction => &[Difficulty::Close, Difficulty::Far],
        }
    }
}

/// Difficulty condition. The comparison tasks use `Easy`, `SmallVariation`
/// and `FarDistance`; the direction task uses `Close` and `Far`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Difficulty {
    Easy,
    SmallVariation,
    FarDistance,
    Close,
    Far,
}

impl Difficulty {
    pub const ALL: [Difficulty; 5] =
        [Difficulty::Easy, Difficulty::SmallVariation, Difficulty::FarDistance, Difficulty::Close, Difficulty::Far];

    pub fn name(&self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::SmallVariation => "small-variation",
            Difficulty::FarDistance => "far-distance",
            Difficulty::Close => "close",
            Difficulty::Far => "far",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }

    /// Target coefficient of variation for a comparison task.
    pub fn cv(&self, family: TaskFamily) -> Result<f64, StimulusError> {
        match (family, self) {
            (TaskFamily::Distance | TaskFamily::Area, Difficulty::Easy | Difficulty::FarDistance) => Ok(0.10),
            (TaskFamily::Distance, Difficulty::SmallVariation) => Ok(0.05),
            (TaskFamily::Area, Difficulty::SmallVariation) => Ok(0.075),
            _ => Err(StimulusError::InvalidDifficulty(*self, family)),
        }
    }

    /// Distance between the two compared items, or between arrow and
    /// target, degrees.
    pub fn separation(&self) -> f64 {
        match self {
            Difficulty::Easy | Difficulty::SmallVariation | Difficulty::Close => CLOSE_SEPARATION,
            Difficulty::FarDistance | Difficulty::Far => FAR_SEPARATION,
        }
    }
}

/// Which of the two presented items is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Choice {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DirectionTruth {
    Hit,
    Miss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Answer {
    First,
    Second,
    Hit,
    Miss,
}

/// Population coefficient of variation of two positive values.
pub fn pair_cv(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a + b)
}

/// Two point pairs, A–B and X–Y; which pair is farther apart?
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceTask {
    pub pair_ab: (GeoCoord, GeoCoord),
    pub pair_xy: (GeoCoord, GeoCoord),
    pub difficulty: Difficulty,
    pub truth: Choice,
    pub cv: f64,
    pub midpoint_separation: f64,
}

impl DistanceTask {
    pub fn distances(&self) -> (f64, f64) {
        (great_circle_distance(self.pair_ab.0, self.pair_ab.1), great_circle_distance(self.pair_xy.0, self.pair_xy.1))
    }

    pub fn midpoints(&self) -> Result<(GeoCoord, GeoCoord), GeometryError> {
        Ok((midpoint(self.pair_ab.0, self.pair_ab.1)?, midpoint(self.pair_xy.0, self.pair_xy.1)?))
    }
}

/// Two polygons; which encloses more area?
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaTask {
    pub poly_a: SphericalPolygon,
    pub poly_b: SphericalPolygon,
    /// Generation centres; every vertex lies `vertex_radius` from its centre.
    pub centre_a: GeoCoord,
    pub centre_b: GeoCoord,
    pub vertex_radius: f64,
    pub difficulty: Difficulty,
    pub truth: Choice,
    pub cv: f64,
    pub centroid_separation: f64,
}

/// An arrow and a target; does the arrow's path continue through the target?
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirectionTask {
    pub arrow_start: GeoCoord,
    pub arrow_bearing: f64,
    pub arrow_length: f64,
    pub target: GeoCoord,
    pub separation: f64,
    pub truth: DirectionTruth,
    pub miss_offset: f64,
}

impl DirectionTask {
    pub fn arrow_end(&self) -> GeoCoord {
        destination(self.arrow_start, self.arrow_bearing, self.arrow_length)
    }

    pub fn difficulty(&self) -> Difficulty {
        if self.separation > (CLOSE_SEPARATION + FAR_SEPARATION) / 2.0 {
            Difficulty::Far
        } else {
            Difficulty::Close
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "kebab-case"))]
pub enum Stimulus {
    Distance(DistanceTask),
    Area(AreaTask),
    Direction(DirectionTask),
}

impl Stimulus {
    pub fn family(&self) -> TaskFamily {
        match self {
            Stimulus::Distance(_) => TaskFamily::Distance,
            Stimulus::Area(_) => TaskFamily::Area,
            Stimulus::Direction(_) => TaskFamily::Direction,
        }
    }

    pub fn difficulty(&self) -> Difficulty {
        match self {
            Stimulus::Distance(t) => t.difficulty,
            Stimulus::Area(t) => t.difficulty,
            Stimulus::Direction(t) => t.difficulty(),
        }
    }

    /// Ground truth recomputed from the task's coordinates.
    pub fn oracle_answer(&self) -> Result<Answer, StimulusError> {
        match self {
            Stimulus::Distance(t) => {
                let (d1, d2) = t.distances();
                Ok(if d1 > d2 { Answer::First } else { Answer::Second })
            }
            Stimulus::Area(t) => {
                let (a1, a2) = (t.poly_a.area()?, t.poly_b.area()?);
                Ok(if a1 > a2 { Answer::First } else { Answer::Second })
            }
            Stimulus::Direction(t) => {
                let xt = cross_track_distance(t.arrow_start, t.arrow_bearing, t.target)?;
                Ok(if xt.abs() < HIT_THRESHOLD { Answer::Hit } else { Answer::Miss })
            }
        }
    }

    /// The generator's recorded truth.
    pub fn truth(&self) -> Answer {
        match self {
            Stimulus::Distance(t) => choice_answer(t.truth),
            Stimulus::Area(t) => choice_answer(t.truth),
            Stimulus::Direction(t) => match t.truth {
                DirectionTruth::Hit => Answer::Hit,
                DirectionTruth::Miss => Answer::Miss,
            },
        }
    }
}

fn choice_answer(c: Choice) -> Answer {
    match c {
        Choice::First => Answer::First,
        Choice::Second => Answer::Second,
    }
}

pub fn oracle_answer(task: &Stimulus) -> Result<Answer, StimulusError> {
    task.oracle_answer()
}

/// Accuracy rescaled so chance is 0 and a perfect score is 1.
pub fn accuracy_score(correct: usize, total: usize) -> Result<f64, StimulusError> {
    if total == 0 {
        return Err(StimulusError::EmptySample);
    }
    if correct > total {
        return Err(StimulusError::CountExceedsTotal { correct, total });
    }
    Ok((correct as f64 / total as f64 - 0.5) / 0.5)
}

/// Optional land/sea classifier for the area task's background constraint.
pub trait LandMask {
    fn is_land(&self, g: GeoCoord) -> bool;
}

impl<F: Fn(GeoCoord) -> bool> LandMask for F {
    fn is_land(&self, g: GeoCoord) -> bool {
        self(g)
    }
}

/// Tunable generator parameters not pinned by the task design.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorConfig {
    /// Perpendicular displacement of missed direction targets, degrees.
    pub miss_offset: f64,
    /// Drawn arrow length, degrees.
    pub arrow_length: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { miss_offset: 15.0, arrow_length: 10.0 }
    }
}

fn random_bearing<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..360.0)
}

/// Second end of a separation: `from` moved `dist` along a random bearing.
fn partner<R: Rng + ?Sized>(rng: &mut R, from: GeoCoord, dist: f64) -> GeoCoord {
    destination(from, random_bearing(rng), dist)
}

/// Endpoints of a `length`-degree arc centred on `centre`.
fn pair_around<R: Rng + ?Sized>(rng: &mut R, centre: GeoCoord, length: f64) -> (GeoCoord, GeoCoord) {
    let b = random_bearing(rng);
    (destination(centre, b, length / 2.0), destination(centre, b + 180.0, length / 2.0))
}

pub fn gen_distance_task<R: Rng + ?Sized>(difficulty: Difficulty, rng: &mut R) -> Result<DistanceTask, StimulusError> {
    let cv = difficulty.cv(TaskFamily::Distance)?;
    let separation = difficulty.separation();
    let (lo, hi) = PAIR_DISTANCE_RANGE;
    for _ in 0..MAX_ATTEMPTS {
        let long = rng.random_range(lo..=hi);
        let short = long * (1.0 - cv) / (1.0 + cv);
        if !(lo..=hi).contains(&short) {
            continue;
        }
        let first_longer = rng.random_bool(0.5);
        let (d_ab, d_xy) = if first_longer { (long, short) } else { (short, long) };
        let m_ab = uniform_sphere_sample(rng);
        let m_xy = partner(rng, m_ab, separation);
        return Ok(DistanceTask {
            pair_ab: pair_around(rng, m_ab, d_ab),
            pair_xy: pair_around(rng, m_xy, d_xy),
            difficulty,
            truth: if first_longer { Choice::First } else { Choice::Second },
            cv,
            midpoint_separation: separation,
        });
    }
    Err(StimulusError::GenerationExhausted(MAX_ATTEMPTS))
}

/// Eight central-angle gaps, each at least [`MIN_VERTEX_GAP`], summing to
/// 360°: a flat Dirichlet draw restricted to that region.
fn random_gaps<R: Rng + ?Sized>(rng: &mut R) -> [f64; POLYGON_VERTICES] {
    let spare = 360.0 - MIN_VERTEX_GAP * POLYGON_VERTICES as f64;
    let mut e = [0.0; POLYGON_VERTICES];
    for x in e.iter_mut() {
        // Exp(1) via inversion; 1 - u avoids ln(0).
        *x = -(1.0 - rng.random::<f64>()).ln();
    }
    let total: f64 = e.iter().sum();
    e.map(|x| MIN_VERTEX_GAP + spare * x / total)
}

/// Vertices at `radius` from `centre`, counter-clockwise seen from outside
/// (bearings decreasing), separated by `gaps`.
fn polygon_from_gaps(
    centre: GeoCoord,
    start_bearing: f64,
    gaps: &[f64; POLYGON_VERTICES],
    radius: f64,
) -> Result<SphericalPolygon, GeometryError> {
    let mut bearing = start_bearing;
    let mut verts = Vec::with_capacity(POLYGON_VERTICES);
    for gap in gaps {
        verts.push(destination(centre, bearing, radius));
        bearing -= gap;
    }
    SphericalPolygon::new(verts)
}

fn blend(a: &[f64; POLYGON_VERTICES], b: &[f64; POLYGON_VERTICES], s: f64) -> [f64; POLYGON_VERTICES] {
    core::array::from_fn(|i| (1.0 - s) * a[i] + s * b[i])
}

/// Gap vector of minimum area: all gaps at the minimum except one, placed
/// where `like` has its widest gap.
fn extreme_gaps(like: &[f64; POLYGON_VERTICES]) -> [f64; POLYGON_VERTICES] {
    let widest = (0..POLYGON_VERTICES)
        .max_by(|&i, &j| like[i].partial_cmp(&like[j]).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    let mut out = [MIN_VERTEX_GAP; POLYGON_VERTICES];
    out[widest] = 360.0 - MIN_VERTEX_GAP * (POLYGON_VERTICES - 1) as f64;
    out
}

/// Shape of the second polygon tuned so its area equals `target`.
///
/// Vertex distance stays fixed; the gap vector is blended from a random
/// draw towards either the regular octagon (largest area) or the most
/// lopsided admissible shape (smallest area) and bisected on the blend
/// weight. `None` when `target` is outside the reachable interval.
fn tuned_gaps(
    centre: GeoCoord,
    start_bearing: f64,
    random: &[f64; POLYGON_VERTICES],
    target: f64,
) -> Result<Option<[f64; POLYGON_VERTICES]>, GeometryError> {
    let area = |gaps: &[f64; POLYGON_VERTICES]| -> Result<f64, GeometryError> {
        polygon_from_gaps(centre, start_bearing, gaps, POLYGON_RADIUS)?.area()
    };
    let base = area(random)?;
    let goal = if target > base { [360.0 / POLYGON_VERTICES as f64; POLYGON_VERTICES] } else { extreme_gaps(random) };
    let end = area(&goal)?;
    if (target - base) * (target - end) > 0.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let increasing = end > base;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let a = area(&blend(random, &goal, mid))?;
        if (a < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(Some(blend(random, &goal, 0.5 * (lo + hi))))
}

pub fn gen_area_task<R: Rng + ?Sized>(difficulty: Difficulty, rng: &mut R) -> Result<AreaTask, StimulusError> {
    gen_area_task_with_mask(difficulty, None::<&fn(GeoCoord) -> bool>, rng)
}

/// Area task whose polygons share one background class when a land mask is
/// supplied: every vertex of both polygons is land, or every one is sea.
pub fn gen_area_task_with_mask<R: Rng + ?Sized, M: LandMask + ?Sized>(
    difficulty: Difficulty,
    mask: Option<&M>,
    rng: &mut R,
) -> Result<AreaTask, StimulusError> {
    let cv = difficulty.cv(TaskFamily::Area)?;
    let separation = difficulty.separation();
    for _ in 0..MAX_ATTEMPTS {
        let centre_a = uniform_sphere_sample(rng);
        let centre_b = partner(rng, centre_a, separation);
        let (start_a, start_b) = (random_bearing(rng), random_bearing(rng));
        let poly_a = polygon_from_gaps(centre_a, start_a, &random_gaps(rng), POLYGON_RADIUS)?;
        let area_a = poly_a.area()?;
        let b_larger = rng.random_bool(0.5);
        let ratio = (1.0 + cv) / (1.0 - cv);
        let target = if b_larger { area_a * ratio } else { area_a / ratio };
        let Some(gaps_b) = tuned_gaps(centre_b, start_b, &random_gaps(rng), target)? else {
            continue;
        };
        let poly_b = polygon_from_gaps(centre_b, start_b, &gaps_b, POLYGON_RADIUS)?;
        if let Some(mask) = mask {
            let mut classes = poly_a.vertices().iter().chain(poly_b.vertices()).map(|&v| mask.is_land(v));
            let first = classes.next().unwrap_or(false);
            if !classes.all(|c| c == first) {
                continue;
            }
        }
        return Ok(AreaTask {
            poly_a,
            poly_b,
            centre_a,
            centre_b,
            vertex_radius: POLYGON_RADIUS,
            difficulty,
            truth: if b_larger { Choice::Second } else { Choice::First },
            cv,
            centroid_separation: separation,
        });
    }
    Err(StimulusError::GenerationExhausted(MAX_ATTEMPTS))
}

pub fn gen_direction_task<R: Rng + ?Sized>(
    separation: f64,
    truth: DirectionTruth,
    config: &GeneratorConfig,
    rng: &mut R,
) -> Result<DirectionTask, StimulusError> {
    let start = uniform_sphere_sample(rng);
    let bearing = random_bearing(rng);
    let on_path = destination(start, bearing, separation);
    let target = match truth {
        DirectionTruth::Hit => on_path,
        DirectionTruth::Miss => {
            // Forward azimuth of the path where it passes `on_path`.
            let forward = initial_bearing(on_path, start)? + 180.0;
            let side = if rng.random_bool(0.5) { 90.0 } else { -90.0 };
            destination(on_path, forward + side, config.miss_offset)
        }
    };
    Ok(DirectionTask {
        arrow_start: start,
        arrow_bearing: bearing,
        arrow_length: config.arrow_length,
        target,
        separation,
        truth,
        miss_offset: match truth {
            DirectionTruth::Hit => 0.0,
            DirectionTruth::Miss => config.miss_offset,
        },
    })
}

/// Generates one stimulus of any family for a difficulty condition. Direction
/// tasks draw Hit or Miss with equal probability.
pub fn gen_task<R: Rng + ?Sized>(
    family: TaskFamily,
    difficulty: Difficulty,
    config: &GeneratorConfig,
    rng: &mut R,
) -> Result<Stimulus, StimulusError> {
    match family {
        TaskFamily::Distance => gen_distance_task(difficulty, rng).map(Stimulus::Distance),
        TaskFamily::Area => gen_area_task(difficulty, rng).map(Stimulus::Area),
        TaskFamily::Direction => {
            if !family.difficulties().contains(&difficulty) {
                return Err(StimulusError::InvalidDifficulty(difficulty, family));
            }
            let truth = if rng.random_bool(0.5) { DirectionTruth::Hit } else { DirectionTruth::Miss };
            gen_direction_task(difficulty.separation(), truth, config, rng).map(Stimulus::Direction)
        }
    }
}

/// Repetitions per (visualisation, task) cell, split by difficulty.
pub fn repetitions(family: TaskFamily) -> &'static [(Difficulty, usize)] {
    match family {
        TaskFamily::Distance | TaskFamily::Area => {
            &[(Difficulty::Easy, 3), (Difficulty::SmallVariation, 3), (Difficulty::FarDistance, 3)]
        }
        TaskFamily::Direction => &[(Difficulty::Close, 6), (Difficulty::Far, 3)],
    }
}

/// Balanced 4x4 Latin square over [`SceneKind::ALL`]: every visualisation
/// appears once per position and every ordered pair of neighbours once.
pub const LATIN_SQUARE: [[usize; 4]; 4] = [[0, 1, 3, 2], [1, 2, 0, 3], [2, 3, 1, 0], [3, 0, 2, 1]];

pub fn visualisation_order(participant_index: u32) -> [SceneKind; 4] {
    LATIN_SQUARE[participant_index as usize % 4].map(|i| SceneKind::ALL[i])
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SessionItem {
    /// Position within the session, from 0.
    pub index: usize,
    pub visualisation: SceneKind,
    pub stimulus: Stimulus,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SessionBlock {
    pub visualisation: SceneKind,
    pub task: TaskFamily,
    pub items: Vec<SessionItem>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Session {
    pub participant_index: u32,
    pub seed: u64,
    pub visualisation_order: [SceneKind; 4],
    pub blocks: Vec<SessionBlock>,
}

impl Session {
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.items.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn items(&self) -> impl Iterator<Item = &SessionItem> {
        self.blocks.iter().flat_map(|b| b.items.iter())
    }
}

/// Full stimulus schedule for one participant.
///
/// Tasks run in the fixed order distance, area, direction; within each task
/// the visualisations follow the participant's Latin-square row. Each block
/// holds the task's nine repetitions in shuffled difficulty order. Item `i`
/// is drawn from random stream `(participant_index << 32) | i` of `seed`.
pub fn build_session(participant_index: u32, seed: u64) -> Result<Session, StimulusError> {
    let config = GeneratorConfig::default();
    let order = visualisation_order(participant_index);
    let mut order_rng = rng::stream(seed, u64::from(participant_index) << 32 | 0xffff_ffff);
    let mut blocks = Vec::new();
    let mut index = 0usize;
    for family in TaskFamily::ORDER {
        for vis in order {
            let mut conditions: Vec<Difficulty> =
                repetitions(family).iter().flat_map(|&(d, n)| core::iter::repeat_n(d, n)).collect();
            conditions.shuffle(&mut order_rng);
            let mut items = Vec::with_capacity(conditions.len());
            for difficulty in conditions {
                let mut item_rng = rng::stream(seed, u64::from(participant_index) << 32 | index as u64);
                let stimulus = gen_task(family, difficulty, &config, &mut item_rng)?;
                items.push(SessionItem { index, visualisation: vis, stimulus });
                index += 1;
            }
            blocks.push(SessionBlock { visualisation: vis, task: family, items });
        }
    }
    Ok(Session { participant_index, seed, visualisation_order: order, blocks })
}

/// Central angles between consecutive vertices as seen from `centre`,
/// degrees.
pub fn central_angles(centre: GeoCoord, poly: &SphericalPolygon) -> Result<Vec<f64>, GeometryError> {
    let mut bearings: Vec<f64> =
        poly.vertices().iter().map(|&v| initial_bearing(centre, v)).collect::<Result<_, _>>()?;
    bearings.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let n = bearings.len();
    Ok((0..n)
        .map(|i| {
            let next = if i + 1 < n { bearings[i + 1] } else { bearings[0] + 360.0 };
            next - bearings[i]
        })
        .collect())
}
