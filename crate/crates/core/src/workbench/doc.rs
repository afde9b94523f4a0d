//! TOML documents for spaces, families, witnesses, transcripts and reports.
//!
//! Sets are written as sorted index lists and spaces list their opens in
//! canonical order, so equal values always render to identical bytes.
//! Documents that live on a space carry `space_hash`, the SHA-256 of the
//! space's canonical rendering with the name left out.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Table;

use crate::error::{Error, Result};
use crate::game::{GameTranscript, Round};
use crate::topo::{ClosureReport, CoverSequence, FiniteSpace, PointSet, Role, SetFamily, SpaceMap};
use crate::transfer::{AbsoluteTriple, LemmaFailure, LemmaReport};
use crate::witness::{FnWitness, FnsWitness};

/// How to treat keys a document type does not know.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    #[default]
    Strict,
    /// Keep unknown keys and write them back out unchanged.
    Lax,
}

pub trait Document: Serialize + DeserializeOwned {
    const FORMAT: &'static str;

    fn format(&self) -> &str;

    /// Unknown keys found at any level, as dotted paths.
    fn unknown_keys(&self) -> Vec<String>;
}

fn keys(prefix: &str, extra: &Table) -> Vec<String> {
    extra.keys().map(|k| if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }).collect()
}

/// Parses a document, checking its format tag and unknown keys.
pub fn parse<D: Document>(text: &str, strictness: Strictness) -> Result<D> {
    let doc: D = toml::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    if doc.format() != D::FORMAT {
        return Err(Error::Document(format!("expected format {:?}, found {:?}", D::FORMAT, doc.format())));
    }
    let unknown = doc.unknown_keys();
    if strictness == Strictness::Strict && !unknown.is_empty() {
        return Err(Error::Document(format!("unknown keys: {}", unknown.join(", "))));
    }
    Ok(doc)
}

pub fn render<D: Document>(doc: &D) -> String {
    toml::to_string(doc).expect("documents contain only TOML-representable values")
}

fn to_list(s: PointSet) -> Vec<usize> {
    s.to_vec()
}

fn from_list(list: &[usize], points: usize, what: &str) -> Result<PointSet> {
    PointSet::try_from_indices(list.iter().copied())
        .filter(|s| s.fits(points) && s.len() == list.len())
        .ok_or_else(|| Error::Document(format!("{what}: {list:?} is not a set of distinct points below {points}")))
}

fn from_lists(lists: &[Vec<usize>], points: usize, what: &str) -> Result<Vec<PointSet>> {
    lists.iter().enumerate().map(|(i, l)| from_list(l, points, &format!("{what}[{i}]"))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for SpaceDoc {
    const FORMAT: &'static str = "fnlab-space-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        keys("", &self.extra)
    }
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteSpace, name: Option<&str>) -> Self {
        SpaceDoc {
            format: Self::FORMAT.into(),
            name: name.map(str::to_string),
            points: space.points(),
            opens: space.opens().iter().map(|&s| to_list(s)).collect(),
            extra: Table::new(),
        }
    }

    /// Builds the space. With `auto_close` the opens are treated as
    /// generators and the report says what had to be added.
    pub fn to_space(&self, auto_close: bool) -> Result<(FiniteSpace, Option<ClosureReport>)> {
        let opens = from_lists(&self.opens, self.points, "opens")?;
        if auto_close {
            let (space, report) = FiniteSpace::generated_by(self.points, opens)?;
            Ok((space, Some(report)))
        } else {
            Ok((FiniteSpace::new(self.points, opens)?, None))
        }
    }
}

/// SHA-256 over the canonical rendering of the unnamed space, in hex.
pub fn space_hash(space: &FiniteSpace) -> String {
    let text = render(&SpaceDoc::from_space(space, None));
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn check_hash(found: &str, space: &FiniteSpace) -> Result<()> {
    let expected = space_hash(space);
    if found != expected {
        return Err(Error::Document(format!(
            "space_hash {found} does not match the supplied space ({expected})"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub format: String,
    pub space_hash: String,
    pub role: Role,
    pub members: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for FamilyDoc {
    const FORMAT: &'static str = "fnlab-family-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        keys("", &self.extra)
    }
}

impl FamilyDoc {
    pub fn from_family(family: &SetFamily) -> Self {
        FamilyDoc {
            format: Self::FORMAT.into(),
            space_hash: space_hash(family.space()),
            role: family.role(),
            members: family.members().iter().map(|&s| to_list(s)).collect(),
            extra: Table::new(),
        }
    }

    pub fn to_family(&self, space: &Arc<FiniteSpace>) -> Result<SetFamily> {
        check_hash(&self.space_hash, space)?;
        let members = from_lists(&self.members, space.points(), "members")?;
        SetFamily::new(space.clone(), members, self.role)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoversDoc {
    pub format: String,
    pub space_hash: String,
    pub covers: Vec<Vec<Vec<usize>>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for CoversDoc {
    const FORMAT: &'static str = "fnlab-covers-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        keys("", &self.extra)
    }
}

impl CoversDoc {
    pub fn from_sequence(seq: &CoverSequence) -> Self {
        CoversDoc {
            format: Self::FORMAT.into(),
            space_hash: space_hash(seq.space()),
            covers: seq
                .covers()
                .iter()
                .map(|c| c.members().iter().map(|&s| to_list(s)).collect())
                .collect(),
            extra: Table::new(),
        }
    }

    pub fn to_sequence(&self, space: &Arc<FiniteSpace>) -> Result<CoverSequence> {
        check_hash(&self.space_hash, space)?;
        let covers = self
            .covers
            .iter()
            .enumerate()
            .map(|(i, c)| from_lists(c, space.points(), &format!("covers[{i}]")))
            .collect::<Result<_>>()?;
        CoverSequence::from_sets(space.clone(), covers)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnsWitnessDoc {
    pub format: String,
    pub space_hash: String,
    pub role: Role,
    pub members: Vec<Vec<usize>>,
    /// `s(U)` for each member, as member indices.
    pub images: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for FnsWitnessDoc {
    const FORMAT: &'static str = "fnlab-fns-witness-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        keys("", &self.extra)
    }
}

impl FnsWitnessDoc {
    pub fn from_witness(w: &FnsWitness) -> Self {
        let family = FamilyDoc::from_family(w.family());
        FnsWitnessDoc {
            format: Self::FORMAT.into(),
            space_hash: family.space_hash,
            role: family.role,
            members: family.members,
            images: w.images().to_vec(),
            extra: Table::new(),
        }
    }

    pub fn to_witness(&self, space: &Arc<FiniteSpace>) -> Result<FnsWitness> {
        check_hash(&self.space_hash, space)?;
        let members = from_lists(&self.members, space.points(), "members")?;
        let family = SetFamily::new(space.clone(), members, self.role)?;
        FnsWitness::new(family, self.images.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnWitnessDoc {
    pub format: String,
    pub space_hash: String,
    pub role: Role,
    pub members: Vec<Vec<usize>>,
    pub up: Vec<Vec<usize>>,
    pub down: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for FnWitnessDoc {
    const FORMAT: &'static str = "fnlab-fn-witness-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        keys("", &self.extra)
    }
}

impl FnWitnessDoc {
    pub fn from_witness(w: &FnWitness) -> Self {
        let family = FamilyDoc::from_family(w.base());
        FnWitnessDoc {
            format: Self::FORMAT.into(),
            space_hash: family.space_hash,
            role: family.role,
            members: family.members,
            up: w.up().to_vec(),
            down: w.down().to_vec(),
            extra: Table::new(),
        }
    }

    pub fn to_witness(&self, space: &Arc<FiniteSpace>) -> Result<FnWitness> {
        check_hash(&self.space_hash, space)?;
        let members = from_lists(&self.members, space.points(), "members")?;
        let base = SetFamily::new(space.clone(), members, self.role)?;
        FnWitness::new(base, self.up.clone(), self.down.clone())
    }
}

/// A space embedded inside another document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedSpace {
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

impl EmbeddedSpace {
    pub fn from_space(space: &FiniteSpace) -> Self {
        let doc = SpaceDoc::from_space(space, None);
        EmbeddedSpace { points: doc.points, opens: doc.opens, extra: Table::new() }
    }

    pub fn to_space(&self, what: &str) -> Result<FiniteSpace> {
        let opens = from_lists(&self.opens, self.points, &format!("{what}.opens"))?;
        FiniteSpace::new(self.points, opens)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleDoc {
    pub format: String,
    /// Image of each point of `z` under `f: z → y`.
    pub f: Vec<usize>,
    /// Image of each point of `z` under `g: z → x`.
    pub g: Vec<usize>,
    pub z: EmbeddedSpace,
    pub y: EmbeddedSpace,
    pub x: EmbeddedSpace,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for TripleDoc {
    const FORMAT: &'static str = "fnlab-triple-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        let mut out = keys("", &self.extra);
        for (name, s) in [("z", &self.z), ("y", &self.y), ("x", &self.x)] {
            out.extend(keys(name, &s.extra));
        }
        out
    }
}

impl TripleDoc {
    pub fn from_triple(t: &AbsoluteTriple) -> Self {
        TripleDoc {
            format: Self::FORMAT.into(),
            f: t.f().image().to_vec(),
            g: t.g().image().to_vec(),
            z: EmbeddedSpace::from_space(t.z()),
            y: EmbeddedSpace::from_space(t.y()),
            x: EmbeddedSpace::from_space(t.x()),
            extra: Table::new(),
        }
    }

    pub fn to_triple(&self) -> Result<AbsoluteTriple> {
        let z = Arc::new(self.z.to_space("z")?);
        let y = Arc::new(self.y.to_space("y")?);
        let x = Arc::new(self.x.to_space("x")?);
        let f = SpaceMap::new(z.clone(), y, self.f.clone())?;
        let g = SpaceMap::new(z, x, self.g.clone())?;
        AbsoluteTriple::new(f, g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundDoc {
    pub offer: Vec<Vec<usize>>,
    pub reply: Vec<Vec<usize>>,
    #[serde(flatten)]
    pub extra: Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub format: String,
    pub space_hash: String,
    pub dense: bool,
    pub early_stop: bool,
    #[serde(default)]
    pub rounds: Vec<RoundDoc>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for TranscriptDoc {
    const FORMAT: &'static str = "fnlab-transcript-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        let mut out = keys("", &self.extra);
        for (i, r) in self.rounds.iter().enumerate() {
            out.extend(keys(&format!("rounds[{i}]"), &r.extra));
        }
        out
    }
}

impl TranscriptDoc {
    pub fn from_transcript(t: &GameTranscript) -> Self {
        let lists = |f: &[PointSet]| f.iter().map(|&s| to_list(s)).collect();
        TranscriptDoc {
            format: Self::FORMAT.into(),
            space_hash: space_hash(&t.space),
            dense: t.dense,
            early_stop: t.early_stop,
            rounds: t
                .rounds
                .iter()
                .map(|r| RoundDoc { offer: lists(&r.offer), reply: lists(&r.reply), extra: Table::new() })
                .collect(),
            extra: Table::new(),
        }
    }

    /// Rebuilds the transcript and rechecks legality and the density flag.
    pub fn to_transcript(&self, space: &Arc<FiniteSpace>) -> Result<GameTranscript> {
        check_hash(&self.space_hash, space)?;
        let n = space.points();
        let rounds = self
            .rounds
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(Round {
                    offer: from_lists(&r.offer, n, &format!("rounds[{i}].offer"))?,
                    reply: from_lists(&r.reply, n, &format!("rounds[{i}].reply"))?,
                })
            })
            .collect::<Result<_>>()?;
        let t = GameTranscript { space: space.clone(), rounds, dense: self.dense, early_stop: self.early_stop };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaFailureDoc {
    pub lemma: String,
    pub image: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
    pub source: EmbeddedSpace,
    pub target: EmbeddedSpace,
    #[serde(flatten)]
    pub extra: Table,
}

impl LemmaFailureDoc {
    pub fn from_failure(f: &LemmaFailure) -> Self {
        LemmaFailureDoc {
            lemma: f.lemma.clone(),
            image: f.map.image().to_vec(),
            sets: f.sets.iter().map(|&s| to_list(s)).collect(),
            source: EmbeddedSpace::from_space(f.map.source()),
            target: EmbeddedSpace::from_space(f.map.target()),
            extra: Table::new(),
        }
    }

    pub fn to_failure(&self) -> Result<LemmaFailure> {
        let source = Arc::new(self.source.to_space("source")?);
        let target = Arc::new(self.target.to_space("target")?);
        let sets = from_lists(&self.sets, source.points(), "sets")?;
        let map = SpaceMap::new(source, target, self.image.clone())?;
        Ok(LemmaFailure { lemma: self.lemma.clone(), map, sets })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReportDoc {
    pub format: String,
    pub instances_checked: u64,
    pub expected_failures_found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<LemmaFailureDoc>,
    #[serde(default)]
    pub failures: Vec<LemmaFailureDoc>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for LemmaReportDoc {
    const FORMAT: &'static str = "fnlab-lemma-report-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        let mut out = keys("", &self.extra);
        let all = self.counterexample.iter().map(|c| ("counterexample".to_string(), c));
        let all = all.chain(self.failures.iter().enumerate().map(|(i, f)| (format!("failures[{i}]"), f)));
        for (path, f) in all {
            out.extend(keys(&path, &f.extra));
            out.extend(keys(&format!("{path}.source"), &f.source.extra));
            out.extend(keys(&format!("{path}.target"), &f.target.extra));
        }
        out
    }
}

impl LemmaReportDoc {
    pub fn from_report(r: &LemmaReport) -> Self {
        LemmaReportDoc {
            format: Self::FORMAT.into(),
            instances_checked: r.instances_checked,
            expected_failures_found: r.expected_failures_found,
            counterexample: r.counterexample.as_ref().map(LemmaFailureDoc::from_failure),
            failures: r.failures.iter().map(LemmaFailureDoc::from_failure).collect(),
            extra: Table::new(),
        }
    }

    pub fn to_report(&self) -> Result<LemmaReport> {
        Ok(LemmaReport {
            instances_checked: self.instances_checked,
            expected_failures_found: self.expected_failures_found,
            counterexample: self.counterexample.as_ref().map(LemmaFailureDoc::to_failure).transpose()?,
            failures: self.failures.iter().map(LemmaFailureDoc::to_failure).collect::<Result<_>>()?,
        })
    }
}

/// One property checked by a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub criterion: u32,
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(flatten)]
    pub extra: Table,
}

impl CheckLine {
    pub fn new(criterion: u32, name: &str, instances: u64, failures: u64, detail: String) -> Self {
        CheckLine { criterion, name: name.into(), instances, failures, detail, extra: Table::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub format: String,
    pub sweep: String,
    pub max_points: usize,
    #[serde(default)]
    pub checks: Vec<CheckLine>,
    #[serde(flatten)]
    pub extra: Table,
}

impl Document for SweepReport {
    const FORMAT: &'static str = "fnlab-sweep-report-1";

    fn format(&self) -> &str {
        &self.format
    }

    fn unknown_keys(&self) -> Vec<String> {
        let mut out = keys("", &self.extra);
        for (i, c) in self.checks.iter().enumerate() {
            out.extend(keys(&format!("checks[{i}]"), &c.extra));
        }
        out
    }
}

impl SweepReport {
    pub fn new(sweep: &str, max_points: usize, checks: Vec<CheckLine>) -> Self {
        SweepReport { format: Self::FORMAT.into(), sweep: sweep.into(), max_points, checks, extra: Table::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckLine::passed)
    }
}
