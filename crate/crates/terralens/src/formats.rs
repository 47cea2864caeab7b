//! JSON documents exchanged with the viewer and analysis tooling: scene
//! descriptions, golden vectors, stimulus batches and sessions.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use terralens_core::rng;
use terralens_core::scene::{HorizonRings, SceneEmbedding, SceneKind, SceneParams};
use terralens_core::sphere::{GeoCoord, SphericalRotation};
use terralens_core::stimuli::{build_session, gen_task, Answer, Difficulty, GeneratorConfig, Stimulus, TaskFamily};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;
/// Agreement required of an independent implementation of the embeddings.
pub const GOLDEN_TOLERANCE_M: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDoc {
    pub kind: SceneKind,
    /// λ, φ, γ in degrees.
    pub rotation: [f64; 3],
    pub params: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub horizon_rings: Option<HorizonRings>,
}

impl SceneDoc {
    pub fn new(scene: &SceneEmbedding) -> Self {
        let mut params = match serde_json::to_value(scene.params) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        params.remove("kind");
        let r = scene.rotation;
        SceneDoc {
            kind: scene.kind(),
            rotation: [r.lambda, r.phi, r.gamma],
            params,
            horizon_rings: scene.horizon_rings(),
        }
    }

    pub fn embedding(&self) -> Result<SceneEmbedding> {
        let mut m = self.params.clone();
        m.insert("kind".into(), serde_json::to_value(self.kind).map_err(|e| CliError::Other(e.to_string()))?);
        let params: SceneParams =
            serde_json::from_value(Value::Object(m)).map_err(|e| CliError::Argument(e.to_string()))?;
        let [l, p, g] = self.rotation;
        Ok(SceneEmbedding { rotation: SphericalRotation::new(l, p, g), params })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenSample {
    /// lon, lat in degrees.
    pub geo: [f64; 2],
    /// World position in metres.
    pub world: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenScene {
    pub scene: SceneDoc,
    pub samples: Vec<GoldenSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenVectors {
    pub version: u32,
    pub tolerance_m: f64,
    pub scenes: Vec<GoldenScene>,
}

/// Rotations each scene is sampled under.
pub const GOLDEN_ROTATIONS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [40.0, -25.0, 0.0], [-120.0, 60.0, 15.0]];

/// Grid of 12 × 9 positions plus `extra` uniform random ones per scene.
pub fn golden_vectors(seed: u64, extra: usize) -> Result<GoldenVectors> {
    let mut scenes = Vec::new();
    for kind in SceneKind::ALL {
        for (ri, [l, p, g]) in GOLDEN_ROTATIONS.into_iter().enumerate() {
            let scene = SceneEmbedding::new(kind).with_rotation(SphericalRotation::new(l, p, g));
            let mut geos = Vec::new();
            for i in 0..12 {
                for j in 0..9 {
                    geos.push(GeoCoord::wrapped(-165.0 + 30.0 * f64::from(i), -80.0 + 20.0 * f64::from(j)));
                }
            }
            let mut r = rng::stream(seed, (kind as u64) << 8 | ri as u64);
            for _ in 0..extra {
                geos.push(GeoCoord::wrapped(r.random_range(-180.0..180.0), r.random_range(-89.0..89.0)));
            }
            let samples = geos
                .into_iter()
                .filter_map(|g| {
                    let w = scene.embed(g).ok()?;
                    Some(GoldenSample { geo: [g.lon(), g.lat()], world: [w.x, w.y, w.z] })
                })
                .collect();
            scenes.push(GoldenScene { scene: SceneDoc::new(&scene), samples });
        }
    }
    Ok(GoldenVectors { version: FORMAT_VERSION, tolerance_m: GOLDEN_TOLERANCE_M, scenes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusEntry {
    pub id: String,
    pub family: TaskFamily,
    pub difficulty: Difficulty,
    /// Task coordinates; enough to recompute the ground truth.
    pub payload: Value,
    pub truth: Answer,
    pub seed: u64,
    /// Random stream of `seed` the task was drawn from.
    pub stream: u64,
    /// Target coefficient of variation; absent for direction tasks.
    pub cv: Option<f64>,
    /// Degrees between the compared items, or from arrow to target.
    pub separation: f64,
}

impl StimulusEntry {
    pub fn new(id: String, stimulus: &Stimulus, seed: u64, stream: u64) -> Result<Self> {
        let (payload, cv, separation) = match stimulus {
            Stimulus::Distance(t) => (serde_json::to_value(t), Some(t.cv), t.midpoint_separation),
            Stimulus::Area(t) => (serde_json::to_value(t), Some(t.cv), t.centroid_separation),
            Stimulus::Direction(t) => (serde_json::to_value(t), None, t.separation),
        };
        Ok(StimulusEntry {
            id,
            family: stimulus.family(),
            difficulty: stimulus.difficulty(),
            payload: payload.map_err(|e| CliError::Other(e.to_string()))?,
            truth: stimulus.truth(),
            seed,
            stream,
            cv,
            separation,
        })
    }

    /// Rebuilds the task from its payload.
    pub fn stimulus(&self) -> Result<Stimulus> {
        let err = |e: serde_json::Error| CliError::Argument(format!("{}: {e}", self.id));
        let p = self.payload.clone();
        Ok(match self.family {
            TaskFamily::Distance => Stimulus::Distance(serde_json::from_value(p).map_err(err)?),
            TaskFamily::Area => Stimulus::Area(serde_json::from_value(p).map_err(err)?),
            TaskFamily::Direction => Stimulus::Direction(serde_json::from_value(p).map_err(err)?),
        })
    }
}

/// `count` tasks; task `i` is drawn from stream `i` of `seed`.
pub fn generate_batch(
    family: TaskFamily,
    difficulty: Difficulty,
    count: usize,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<Vec<StimulusEntry>> {
    (0..count)
        .map(|i| {
            let stream = i as u64;
            let s = gen_task(family, difficulty, config, &mut rng::stream(seed, stream))?;
            let id = format!("{}-{}-{seed}-{i:04}", family.name(), difficulty.name());
            StimulusEntry::new(id, &s, seed, stream)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionEntry {
    pub index: usize,
    pub visualisation: SceneKind,
    #[serde(flatten)]
    pub stimulus: StimulusEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionDoc {
    pub version: u32,
    pub participant: u32,
    pub seed: u64,
    pub visualisation_order: [SceneKind; 4],
    pub entries: Vec<SessionEntry>,
}

pub fn session_doc(participant: u32, seed: u64) -> Result<SessionDoc> {
    let session = build_session(participant, seed)?;
    let entries = session
        .items()
        .map(|item| {
            let stream = u64::from(participant) << 32 | item.index as u64;
            let id = format!("p{participant}-{:03}", item.index);
            Ok(SessionEntry {
                index: item.index,
                visualisation: item.visualisation,
                stimulus: StimulusEntry::new(id, &item.stimulus, seed, stream)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SessionDoc {
        version: FORMAT_VERSION,
        participant,
        seed,
        visualisation_order: session.visualisation_order,
        entries,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Other(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
