use exact_arith::{Rational, Scalar};
use isometry_catalog::{Catalog, GeneratorPreset};
use lorentz_core::linalg::{map_vec, Vec4};
use serde::{Deserialize, Serialize};

use crate::blend::{ghost_face, glue, shift_wall, slice, BlendedGroup, Face, SliceMode};
use crate::embed::{vertical_line, Embedding, Std};
use crate::BlendError;

/// A number given either as a JSON number or as a string like `"3/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn rational(&self) -> Result<Rational, BlendError> {
        match self {
            Number::Int(v) => Ok(Rational::from_int(*v)),
            Number::Text(s) => s.parse().map_err(|_| BlendError::Descriptor(format!("not a rational: {s:?}"))),
        }
    }
}

impl From<&Rational> for Number {
    fn from(r: &Rational) -> Self {
        match r.to_integer().and_then(|i| i64::try_from(i).ok()) {
            Some(i) => Number::Int(i),
            None => Number::Text(r.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceSpec {
    /// Plane through the endpoints of the named rotation, orthogonal to `h`.
    Ghost(String),
    /// Vector in the left preset's lattice coordinates.
    Lattice([Number; 4]),
    /// Inversive coordinates, entries like `"1/2*sqrt(7)"`.
    Inversive([String; 4]),
    /// The vertical line `x = value`.
    Vertical(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SliceMode>,
    pub face: FaceSpec,
}

/// The blend file read by the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlendDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub left: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<Face>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Number>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<SliceSpec>,
    /// Curvature bound for the slice crossing test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_bound: Option<Number>,
}

impl BlendDescriptor {
    pub fn preset(n: i64) -> Self {
        BlendDescriptor {
            strategy: None,
            left: Number::Int(n),
            right: None,
            face: None,
            offset: None,
            slices: Vec::new(),
            slice_bound: None,
        }
    }

    /// The explicit strategy, or the one implied by the fields present.
    pub fn strategy_name(&self) -> String {
        if let Some(s) = &self.strategy {
            return s.clone();
        }
        if self.right.is_some() {
            match self.face.unwrap_or(Face::V1) {
                Face::V1 => "glue_v1".into(),
                Face::V2 => "glue_v2".into(),
            }
        } else if self.offset.is_some() {
            "shift_wall".into()
        } else {
            "preset".into()
        }
    }
}

/// Parameters handed to a [`GroupSource`].
pub struct SourceSpec<'a> {
    pub catalog: &'a Catalog,
    pub left: GeneratorPreset,
    pub right: Option<GeneratorPreset>,
    pub offset: Option<Rational>,
    pub slices: &'a [SliceSpec],
    pub slice_bound: Rational,
}

impl SourceSpec<'_> {
    fn right(&self) -> Result<&GeneratorPreset, BlendError> {
        self.right.as_ref().ok_or_else(|| BlendError::Descriptor("this strategy needs \"right\"".into()))
    }

    pub fn face_vector(&self, face: &FaceSpec) -> Result<Vec4<Std>, BlendError> {
        let parse = |s: &str| s.parse::<Std>().map_err(|e| BlendError::Descriptor(format!("{s:?}: {e}")));
        match face {
            FaceSpec::Ghost(name) => ghost_face(&self.left, name),
            FaceSpec::Lattice(c) => {
                let q: Vec<Rational> = c.iter().map(Number::rational).collect::<Result<_, _>>()?;
                let v = [q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()];
                Ok(Embedding::new(&self.left.n)?.vector(&map_vec(&v, |x| Std::from_rational(x).expect("rational"))))
            }
            FaceSpec::Inversive(c) => Ok([parse(&c[0])?, parse(&c[1])?, parse(&c[2])?, parse(&c[3])?]),
            FaceSpec::Vertical(x) => Ok(vertical_line(&parse(x)?)),
        }
    }

    /// Applies `slices` in order; `forced` overrides (and must agree with) each slice's mode.
    pub fn apply_slices(&self, mut group: BlendedGroup, forced: Option<SliceMode>) -> Result<BlendedGroup, BlendError> {
        for s in self.slices {
            let mode = match (forced, s.mode) {
                (Some(f), Some(m)) if f != m => {
                    return Err(BlendError::Descriptor(format!("slice mode {m:?} conflicts with the strategy")))
                }
                (Some(f), _) => f,
                (None, Some(m)) => m,
                (None, None) => return Err(BlendError::Descriptor("slice without a mode".into())),
            };
            group = slice(&group, &self.face_vector(&s.face)?, mode, &self.slice_bound)?;
        }
        Ok(group)
    }
}

/// A named way of producing a packing group.
pub trait GroupSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, spec: &SourceSpec) -> Result<BlendedGroup, BlendError>;
    /// Whether the source consumes the descriptor's slices itself.
    fn takes_slices(&self) -> bool {
        false
    }
}

struct PresetSource;
struct ShiftSource;
struct GlueSource(Face);
struct SliceSource(SliceMode);

impl GroupSource for PresetSource {
    fn name(&self) -> &'static str {
        "preset"
    }
    fn summary(&self) -> &'static str {
        "the catalog group of one lattice"
    }
    fn build(&self, spec: &SourceSpec) -> Result<BlendedGroup, BlendError> {
        BlendedGroup::from_preset(&spec.left)
    }
}

impl GroupSource for ShiftSource {
    fn name(&self) -> &'static str {
        "shift_wall"
    }
    fn summary(&self) -> &'static str {
        "R_v1 replaced by the reflection in x = -offset"
    }
    fn build(&self, spec: &SourceSpec) -> Result<BlendedGroup, BlendError> {
        let offset = spec
            .offset
            .as_ref()
            .ok_or_else(|| BlendError::Descriptor("shift_wall needs \"offset\"".into()))?;
        shift_wall(&spec.left, offset)
    }
}

impl GroupSource for GlueSource {
    fn name(&self) -> &'static str {
        match self.0 {
            Face::V1 => "glue_v1",
            Face::V2 => "glue_v2",
        }
    }
    fn summary(&self) -> &'static str {
        match self.0 {
            Face::V1 => "two strips glued along x = 0, the left one flipped",
            Face::V2 => "two strips glued along the right wall of the left one",
        }
    }
    fn build(&self, spec: &SourceSpec) -> Result<BlendedGroup, BlendError> {
        glue(&spec.left, spec.right()?, self.0)
    }
}

impl GroupSource for SliceSource {
    fn name(&self) -> &'static str {
        match self.0 {
            SliceMode::Fill => "slice_fill",
            SliceMode::Reflect => "slice_reflect",
        }
    }
    fn summary(&self) -> &'static str {
        match self.0 {
            SliceMode::Fill => "ghost faces added as new circles",
            SliceMode::Reflect => "reflections in ghost faces added as generators",
        }
    }
    fn build(&self, spec: &SourceSpec) -> Result<BlendedGroup, BlendError> {
        if spec.slices.is_empty() {
            return Err(BlendError::Descriptor(format!("{} needs at least one slice", self.name())));
        }
        spec.apply_slices(BlendedGroup::from_preset(&spec.left)?, Some(self.0))
    }
    fn takes_slices(&self) -> bool {
        true
    }
}

/// Group sources by name.
pub struct Registry {
    sources: Vec<Box<dyn GroupSource>>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Option<&dyn GroupSource> {
        self.sources.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.sources.iter().map(|s| s.name()).collect()
    }

    pub fn register(&mut self, source: Box<dyn GroupSource>) {
        self.sources.retain(|s| s.name() != source.name());
        self.sources.push(source);
    }

    /// Resolves the descriptor against the catalog and builds the group.
    pub fn build(&self, catalog: &Catalog, desc: &BlendDescriptor) -> Result<BlendedGroup, BlendError> {
        let name = desc.strategy_name();
        let source = self.get(&name).ok_or_else(|| BlendError::UnknownStrategy(name.clone()))?;
        let left = catalog.preset(&desc.left.rational()?)?;
        let right = desc.right.as_ref().map(|r| r.rational().and_then(|n| Ok(catalog.preset(&n)?))).transpose()?;
        if let (Some(face), true) = (desc.face, name.starts_with("glue")) {
            let implied = if name == "glue_v1" { Face::V1 } else { Face::V2 };
            if face != implied {
                return Err(BlendError::Descriptor(format!("face {face:?} conflicts with strategy {name}")));
            }
        }
        let spec = SourceSpec {
            catalog,
            left,
            right,
            offset: desc.offset.as_ref().map(Number::rational).transpose()?,
            slices: &desc.slices,
            slice_bound: desc.slice_bound.as_ref().map(Number::rational).transpose()?.unwrap_or_else(|| Rational::from_int(20)),
        };
        let group = source.build(&spec)?;
        if source.takes_slices() {
            Ok(group)
        } else {
            spec.apply_slices(group, None)
        }
    }
}

pub fn registry() -> Registry {
    Registry {
        sources: vec![
            Box::new(PresetSource),
            Box::new(ShiftSource),
            Box::new(GlueSource(Face::V1)),
            Box::new(GlueSource(Face::V2)),
            Box::new(SliceSource(SliceMode::Fill)),
            Box::new(SliceSource(SliceMode::Reflect)),
        ],
    }
}
