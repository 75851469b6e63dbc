//! Iteration of circuits under a train-track map with exact window counts.
//!
//! A circuit is kept as the cyclic list of its maximal legal segments, so
//! every junction between consecutive segments is illegal. Short segments
//! are explicit words. Long ones keep their first and last letters plus the
//! number of occurrences of every window of length `<= R`. The image of a
//! legal segment is legal, so window counts push forward linearly and all
//! cancellation happens at the illegal junctions, within the explicit ends.
//! Counts are floats: exact below 2^53 and relatively accurate beyond.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::currents::{Provenance, WeightSystem};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::{GraphMap, LegalityTable};
use crate::path::{inverse_edges, EdgePath};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackedConfig {
    /// Longest window counted.
    pub window: usize,
    /// Letters kept at each end of a packed segment.
    pub head: usize,
    /// Segments up to this length stay explicit.
    pub explicit_max: usize,
}

impl PackedConfig {
    /// Ends comfortably longer than the cancellation at one junction.
    pub fn new(window: usize, cf: usize) -> PackedConfig {
        let head = 64usize.max(2 * (cf + window) + 32);
        PackedConfig {
            window,
            head,
            explicit_max: 4 * head,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Segment {
    Explicit(Vec<Edge>),
    Packed {
        head: VecDeque<Edge>,
        tail: VecDeque<Edge>,
        counts: Vec<f64>,
        len: f64,
    },
}

impl Segment {
    fn len(&self) -> f64 {
        match self {
            Segment::Explicit(w) => w.len() as f64,
            Segment::Packed { len, .. } => *len,
        }
    }

    fn first(&self) -> Edge {
        match self {
            Segment::Explicit(w) => w[0],
            Segment::Packed { head, .. } => head[0],
        }
    }

    fn last(&self) -> Edge {
        match self {
            Segment::Explicit(w) => w[w.len() - 1],
            Segment::Packed { tail, .. } => tail[tail.len() - 1],
        }
    }

    /// Up to `k` leading letters.
    fn prefix(&self, k: usize) -> Vec<Edge> {
        match self {
            Segment::Explicit(w) => w[..k.min(w.len())].to_vec(),
            Segment::Packed { head, .. } => head.iter().take(k).copied().collect(),
        }
    }

    /// Up to `k` trailing letters.
    fn suffix(&self, k: usize) -> Vec<Edge> {
        match self {
            Segment::Explicit(w) => w[w.len() - k.min(w.len())..].to_vec(),
            Segment::Packed { tail, .. } => tail
                .iter()
                .skip(tail.len().saturating_sub(k))
                .copied()
                .collect(),
        }
    }
}

/// Interned windows with cached images.
#[derive(Clone, Debug, Default)]
struct Windows {
    words: Vec<Vec<Edge>>,
    index: BTreeMap<Vec<Edge>, usize>,
    slides: Vec<Option<Vec<(usize, f64)>>>,
}

impl Windows {
    fn id(&mut self, w: &[Edge]) -> usize {
        if let Some(&i) = self.index.get(w) {
            return i;
        }
        let i = self.words.len();
        self.words.push(w.to_vec());
        self.index.insert(w.to_vec(), i);
        self.slides.push(None);
        i
    }

    /// Windows of `f(v)` of length `ℓ(v)` starting inside `f(v_1)`.
    fn slide(&mut self, f: &GraphMap, i: usize) -> Vec<(usize, f64)> {
        if let Some(s) = &self.slides[i] {
            return s.clone();
        }
        let v = self.words[i].clone();
        let k = v.len();
        let img = f.image_of_edges(&v);
        let lead = f.image(v[0]).len();
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for p in 0..lead {
            let j = self.id(&img[p..p + k]);
            *acc.entry(j).or_insert(0.0) += 1.0;
        }
        let s: Vec<(usize, f64)> = acc.into_iter().collect();
        self.slides[i] = Some(s.clone());
        s
    }
}

fn add(counts: &mut Vec<f64>, i: usize, x: f64) -> Result<()> {
    if counts.len() <= i {
        counts.resize(i + 1, 0.0);
    }
    counts[i] += x;
    if !counts[i].is_finite() {
        return Err(Error::CountOverflow);
    }
    Ok(())
}

/// A circuit as a cyclic list of maximal legal segments.
#[derive(Clone, Debug, PartialEq)]
pub struct PackedCircuit {
    segments: Vec<Segment>,
    /// For a single segment: whether the junction closing it up is legal.
    wrap_legal: bool,
}

impl PackedCircuit {
    pub fn len(&self) -> f64 {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of illegal turns.
    pub fn ilt(&self) -> u64 {
        if self.segments.len() == 1 && self.wrap_legal {
            0
        } else {
            self.segments.len() as u64
        }
    }

    /// Edges at distance `>= c` from every illegal turn.
    pub fn good_edges(&self, c: usize) -> f64 {
        if self.ilt() == 0 {
            return self.len();
        }
        self.segments
            .iter()
            .map(|s| (s.len() - 2.0 * c as f64).max(0.0))
            .sum()
    }

    pub fn goodness(&self, c: usize) -> f64 {
        self.good_edges(c) / self.len()
    }

    /// Lengths of the legal segments, in cyclic order.
    pub fn segment_lengths(&self) -> Vec<f64> {
        self.segments.iter().map(Segment::len).collect()
    }

    pub fn is_explicit(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s, Segment::Explicit(_)))
    }

    /// The cyclic word when every segment is explicit.
    pub fn explicit_word(&self) -> Option<Vec<Edge>> {
        let mut out = Vec::new();
        for s in &self.segments {
            match s {
                Segment::Explicit(w) => out.extend_from_slice(w),
                Segment::Packed { .. } => return None,
            }
        }
        Some(out)
    }

    pub fn to_circuit(&self) -> Option<Circuit> {
        self.explicit_word().map(|w| Circuit::from_cyclic(&w, 1))
    }
}

/// Iterates packed circuits under one map.
#[derive(Clone, Debug)]
pub struct PackedIterator<'a> {
    f: &'a GraphMap,
    table: LegalityTable,
    config: PackedConfig,
    windows: Windows,
}

impl<'a> PackedIterator<'a> {
    pub fn new(f: &'a GraphMap, config: PackedConfig) -> Result<PackedIterator<'a>> {
        if config.window == 0
            || config.head <= config.window
            || config.explicit_max < 2 * config.head
        {
            return Err(Error::Invalid(
                "packed iteration needs 0 < window < head <= explicit_max / 2".into(),
            ));
        }
        if !f.is_train_track() {
            return Err(Error::NotTrainTrack);
        }
        Ok(PackedIterator {
            f,
            table: f.legality(),
            config,
            windows: Windows::default(),
        })
    }

    pub fn config(&self) -> PackedConfig {
        self.config
    }

    pub fn map(&self) -> &GraphMap {
        self.f
    }

    fn make(&mut self, w: Vec<Edge>) -> Result<Segment> {
        if w.len() <= self.config.explicit_max {
            return Ok(Segment::Explicit(w));
        }
        let mut counts = Vec::new();
        self.count_linear(&w, &mut counts)?;
        let h = self.config.head;
        Ok(Segment::Packed {
            head: w[..h].iter().copied().collect(),
            tail: w[w.len() - h..].iter().copied().collect(),
            len: w.len() as f64,
            counts,
        })
    }

    fn count_linear(&mut self, w: &[Edge], counts: &mut Vec<f64>) -> Result<()> {
        for p in 0..w.len() {
            for k in 1..=self.config.window.min(w.len() - p) {
                let i = self.windows.id(&w[p..p + k]);
                add(counts, i, 1.0)?;
            }
        }
        Ok(())
    }

    /// Windows of `s t` that start in `s` and end in `t`.
    fn count_crossing(&mut self, s: &[Edge], t: &[Edge], counts: &mut Vec<f64>) -> Result<()> {
        let st: Vec<Edge> = s.iter().chain(t).copied().collect();
        for p in 0..s.len() {
            let lo = s.len() - p + 1;
            let hi = self.config.window.min(st.len() - p);
            for k in lo..=hi {
                let i = self.windows.id(&st[p..p + k]);
                add(counts, i, 1.0)?;
            }
        }
        Ok(())
    }

    fn segment_counts(&mut self, s: &Segment) -> Result<Vec<f64>> {
        match s {
            Segment::Explicit(w) => {
                let mut counts = Vec::new();
                self.count_linear(w, &mut counts)?;
                Ok(counts)
            }
            Segment::Packed { counts, .. } => Ok(counts.clone()),
        }
    }

    /// Splits an explicit circuit into maximal legal segments.
    pub fn start(&mut self, c: &Circuit) -> Result<PackedCircuit> {
        if c.is_empty() {
            return Err(Error::EmptyCircuit);
        }
        let w = c.word();
        let n = w.len();
        let legal: Vec<bool> = (0..n)
            .map(|j| self.table.junction_legal(w[(j + n - 1) % n], w[j]))
            .collect();
        let Some(j0) = legal.iter().position(|&x| !x) else {
            let s = self.make(w)?;
            return Ok(PackedCircuit {
                segments: vec![s],
                wrap_legal: true,
            });
        };
        let mut segments = Vec::new();
        let mut cur = Vec::new();
        for i in 0..n {
            let j = (j0 + i) % n;
            if !legal[j] && !cur.is_empty() {
                segments.push(self.make(core::mem::take(&mut cur))?);
            }
            cur.push(w[j]);
        }
        segments.push(self.make(cur)?);
        Ok(PackedCircuit {
            segments,
            wrap_legal: false,
        })
    }

    fn image(&mut self, s: &Segment) -> Result<Segment> {
        match s {
            Segment::Explicit(w) => {
                let img = self.f.image_of_edges(w);
                self.make(img)
            }
            Segment::Packed {
                head, tail, counts, ..
            } => {
                let mut next = Vec::new();
                for (i, &x) in counts.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    for (j, m) in self.windows.slide(self.f, i) {
                        add(&mut next, j, x * m)?;
                    }
                }
                // windows starting in the images of the last k-1 letters
                let tail_vec: Vec<Edge> = tail.iter().copied().collect();
                for k in 2..=self.config.window {
                    let img = self.f.image_of_edges(&tail_vec[tail_vec.len() - (k - 1)..]);
                    for p in 0..img.len().saturating_sub(k - 1) {
                        let i = self.windows.id(&img[p..p + k]);
                        add(&mut next, i, 1.0)?;
                    }
                }
                let len = self.length_from(&next)?;
                let h = self.config.head;
                let head_vec: Vec<Edge> = head.iter().copied().collect();
                let fh = self.f.image_of_edges(&head_vec);
                let ft = self.f.image_of_edges(&tail_vec);
                Ok(Segment::Packed {
                    head: fh[..h.min(fh.len())].iter().copied().collect(),
                    tail: ft[ft.len() - h.min(ft.len())..].iter().copied().collect(),
                    counts: next,
                    len,
                })
            }
        }
    }

    fn length_from(&self, counts: &[f64]) -> Result<f64> {
        let len: f64 = counts
            .iter()
            .enumerate()
            .filter(|(i, _)| self.windows.words[*i].len() == 1)
            .map(|(_, &x)| x)
            .sum();
        if !len.is_finite() {
            return Err(Error::CountOverflow);
        }
        Ok(len)
    }

    fn pop_front(&mut self, s: &mut Segment) -> Result<()> {
        match s {
            Segment::Explicit(w) => {
                w.remove(0);
            }
            Segment::Packed {
                head, counts, len, ..
            } => {
                if head.len() <= self.config.window {
                    return Err(Error::CompressionExhausted);
                }
                let front: Vec<Edge> = head.iter().take(self.config.window).copied().collect();
                for k in 1..=front.len() {
                    let i = self.windows.id(&front[..k]);
                    counts[i] -= 1.0;
                }
                head.pop_front();
                *len -= 1.0;
            }
        }
        Ok(())
    }

    fn pop_back(&mut self, s: &mut Segment) -> Result<()> {
        match s {
            Segment::Explicit(w) => {
                w.pop();
            }
            Segment::Packed {
                tail, counts, len, ..
            } => {
                if tail.len() <= self.config.window {
                    return Err(Error::CompressionExhausted);
                }
                let back: Vec<Edge> = tail
                    .iter()
                    .skip(tail.len() - self.config.window)
                    .copied()
                    .collect();
                for k in 1..=back.len() {
                    let i = self.windows.id(&back[back.len() - k..]);
                    counts[i] -= 1.0;
                }
                tail.pop_back();
                *len -= 1.0;
            }
        }
        Ok(())
    }

    /// `s t` across a legal junction.
    fn merge(&mut self, s: Segment, t: Segment) -> Result<Segment> {
        if let (Segment::Explicit(a), Segment::Explicit(b)) = (&s, &t) {
            let mut w = a.clone();
            w.extend_from_slice(b);
            return self.make(w);
        }
        let r = self.config.window;
        let h = self.config.head;
        let mut counts = self.segment_counts(&s)?;
        for (i, x) in self.segment_counts(&t)?.into_iter().enumerate() {
            add(&mut counts, i, x)?;
        }
        self.count_crossing(&s.suffix(r - 1), &t.prefix(r - 1), &mut counts)?;
        let mut head = s.prefix(h);
        if head.len() < h {
            head.extend(t.prefix(h - head.len()));
        }
        let mut tail = t.suffix(h);
        if tail.len() < h {
            let mut front = s.suffix(h - tail.len());
            front.extend(tail);
            tail = front;
        }
        let len = s.len() + t.len();
        Ok(Segment::Packed {
            head: head.into(),
            tail: tail.into(),
            counts,
            len,
        })
    }

    /// `[f(c)]` for the circuit `c`.
    pub fn step(&mut self, pc: &PackedCircuit) -> Result<PackedCircuit> {
        let mut out: Vec<Segment> = Vec::new();
        for s in &pc.segments {
            let mut cur = self.image(s)?;
            loop {
                let Some(top) = out.last_mut() else {
                    out.push(cur);
                    break;
                };
                if top.last() == cur.first().inv() {
                    let mut t = out.pop().unwrap();
                    self.pop_back(&mut t)?;
                    self.pop_front(&mut cur)?;
                    if t.len() > 0.0 {
                        out.push(t);
                    }
                    if cur.len() == 0.0 {
                        break;
                    }
                    continue;
                }
                if self.table.junction_legal(top.last(), cur.first()) {
                    let t = out.pop().unwrap();
                    cur = self.merge(t, cur)?;
                    continue;
                }
                out.push(cur);
                break;
            }
        }
        self.close(out)
    }

    fn close(&mut self, mut out: Vec<Segment>) -> Result<PackedCircuit> {
        loop {
            match out.len() {
                0 => return Err(Error::EmptyCircuit),
                1 => {
                    let mut s = out.pop().unwrap();
                    while s.len() >= 2.0 && s.last() == s.first().inv() {
                        self.pop_back(&mut s)?;
                        self.pop_front(&mut s)?;
                    }
                    if s.len() == 0.0 {
                        return Err(Error::EmptyCircuit);
                    }
                    let wrap_legal = self.table.junction_legal(s.last(), s.first());
                    return Ok(PackedCircuit {
                        segments: vec![s],
                        wrap_legal,
                    });
                }
                n => {
                    let (last, first) = (out[n - 1].last(), out[0].first());
                    if last == first.inv() {
                        let mut t = out.pop().unwrap();
                        self.pop_back(&mut t)?;
                        if t.len() > 0.0 {
                            out.push(t);
                        }
                        let mut h = out.remove(0);
                        self.pop_front(&mut h)?;
                        if h.len() > 0.0 {
                            out.insert(0, h);
                        }
                        continue;
                    }
                    if self.table.junction_legal(last, first) {
                        let t = out.pop().unwrap();
                        let h = out.remove(0);
                        let m = self.merge(t, h)?;
                        out.insert(0, m);
                        continue;
                    }
                    return Ok(PackedCircuit {
                        segments: out,
                        wrap_legal: false,
                    });
                }
            }
        }
    }

    /// Cyclic occurrence counts of windows of length `<= R`, one orientation.
    pub fn window_counts(&mut self, pc: &PackedCircuit) -> Result<BTreeMap<Vec<Edge>, f64>> {
        let r = self.config.window;
        let total = pc.len();
        let n = pc.segments.len();
        let mut counts = Vec::new();
        for (i, s) in pc.segments.iter().enumerate() {
            for (j, x) in self.segment_counts(s)?.into_iter().enumerate() {
                add(&mut counts, j, x)?;
            }
            if r < 2 {
                continue;
            }
            // the next r-1 letters cyclically, wrapping as often as needed
            let mut next = Vec::with_capacity(r - 1);
            let mut j = (i + 1) % n;
            while next.len() < r - 1 && total > 0.0 {
                next.extend(pc.segments[j].prefix(r - 1 - next.len()));
                j = (j + 1) % n;
            }
            self.count_crossing(&s.suffix(r - 1), &next, &mut counts)?;
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, x)| x > 0.0)
            .map(|(i, x)| (self.windows.words[i].clone(), x))
            .collect())
    }

    /// `η_c` truncated at `depth <= R`, values as floats.
    pub fn weight_system(&mut self, pc: &PackedCircuit, depth: usize) -> Result<WeightSystem<f64>> {
        if depth > self.config.window {
            return Err(Error::DepthTooSmall {
                have: self.config.window,
                need: depth,
            });
        }
        let mut values: BTreeMap<EdgePath, f64> = BTreeMap::new();
        for (w, x) in self.window_counts(pc)? {
            if w.len() <= depth {
                *values
                    .entry(EdgePath::new(inverse_edges(&w)))
                    .or_insert(0.0) += x;
                *values.entry(EdgePath::new(w)).or_insert(0.0) += x;
            }
        }
        Ok(WeightSystem::from_map(
            depth,
            values,
            Provenance::Rational,
            0.0,
        ))
    }

    /// Occurrences of each positive edge in either orientation.
    pub fn edge_counts(&mut self, pc: &PackedCircuit) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.f.graph().edge_count()];
        for s in &pc.segments {
            for (i, x) in self.segment_counts(s)?.into_iter().enumerate() {
                let w = &self.windows.words[i];
                if w.len() == 1 && x > 0.0 {
                    out[w[0].index()] += x;
                }
            }
        }
        Ok(out)
    }
}
