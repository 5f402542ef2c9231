//! Partial edge colorings and the color-neighborhood queries used by every
//! other module.
//!
//! Absence is first-class: an unassigned edge contributes nothing to any
//! query and is never encoded as a sentinel color value.

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeGraph, EdgeId, VertexId};

/// An edge color. The constructions use `0..=4`; the exact solver may go up
/// to `6` (the cubic star chromatic index never exceeds 7 colors).
pub type Color = u8;

/// Largest color value any routine will assign.
pub const MAX_COLOR: Color = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("colorings disagree on edge {edge}: {left} vs {right}")]
    MergeConflict { edge: EdgeId, left: Color, right: Color },
    #[error("colorings cover different edge sets ({0} vs {1} edges)")]
    SizeMismatch(usize, usize),
    #[error("edge {edge} already colored {old}, refusing silent overwrite with {new}")]
    AlreadyColored { edge: EdgeId, old: Color, new: Color },
}

/// A small set of colors, backed by a bitmask over `0..=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ColorSet(u8);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn singleton(c: Color) -> Self {
        ColorSet(1 << c)
    }

    pub fn of(colors: &[Color]) -> Self {
        let mut s = ColorSet::EMPTY;
        for &c in colors {
            s.insert(c);
        }
        s
    }

    /// Colors `0..limit`.
    pub fn all_below(limit: Color) -> Self {
        ColorSet((1u16 << limit).wrapping_sub(1) as u8)
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1 << c);
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn minus(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<Color> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Color)
        }
    }

    /// Ascending iterator.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        (0..8).filter(move |&c| self.contains(c))
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for c in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Three pairwise-distinct colors; the working palette of the extension
/// lemmas (`a`, `b`, `c` in the proofs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette3 {
    pub a: Color,
    pub b: Color,
    pub c: Color,
}

impl Palette3 {
    pub fn new(a: Color, b: Color, c: Color) -> Self {
        assert!(a != b && b != c && a != c, "palette colors must be distinct");
        assert!(a <= MAX_COLOR && b <= MAX_COLOR && c <= MAX_COLOR);
        Palette3 { a, b, c }
    }

    pub fn contains(&self, x: Color) -> bool {
        x == self.a || x == self.b || x == self.c
    }

    pub fn as_set(&self) -> ColorSet {
        ColorSet::of(&[self.a, self.b, self.c])
    }

    /// The palette member distinct from both arguments (which must differ).
    pub fn third_besides(&self, x: Color, y: Color) -> Color {
        debug_assert!(x != y && self.contains(x) && self.contains(y));
        self.as_set().minus(ColorSet::of(&[x, y])).min().unwrap()
    }

    /// Members in ascending order.
    pub fn sorted(&self) -> [Color; 3] {
        let mut v = [self.a, self.b, self.c];
        v.sort_unstable();
        v
    }
}

/// A mutable assignment from edges to colors, with absent entries allowed.
///
/// Indexed by [`EdgeId`] of the graph it colors; constructors take the edge
/// count so a coloring can only be used with a graph of matching size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    pub fn new(edge_count: usize) -> Self {
        PartialColoring {
            colors: vec![None; edge_count],
        }
    }

    pub fn for_graph(g: &impl EdgeGraph) -> Self {
        Self::new(g.edge_count())
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    pub fn is_assigned(&self, e: EdgeId) -> bool {
        self.colors[e].is_some()
    }

    /// Assigns a fresh color. Re-assigning the same value is a no-op;
    /// changing an existing value is an error (use [`recolor`] for that).
    ///
    /// [`recolor`]: PartialColoring::recolor
    pub fn set(&mut self, e: EdgeId, c: Color) -> Result<(), ColoringError> {
        match self.colors[e] {
            None => {
                self.colors[e] = Some(c);
                Ok(())
            }
            Some(old) if old == c => Ok(()),
            Some(old) => Err(ColoringError::AlreadyColored { edge: e, old, new: c }),
        }
    }

    /// Overwrites (or sets) the color of `e`, returning the previous value
    /// so the caller can log the change.
    pub fn recolor(&mut self, e: EdgeId, c: Color) -> Option<Color> {
        self.colors[e].replace(c)
    }

    pub fn unset(&mut self, e: EdgeId) -> Option<Color> {
        self.colors[e].take()
    }

    pub fn assigned_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|c| c.is_some())
    }

    pub fn assigned_edges(&self) -> impl Iterator<Item = (EdgeId, Color)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(e, c)| c.map(|c| (e, c)))
    }

    /// `F_G(x)`: colors of the assigned edges incident to `x`.
    pub fn colors_at_vertex(&self, g: &impl EdgeGraph, x: VertexId) -> ColorSet {
        assert!(x < g.vertex_count(), "unknown vertex {x}");
        let mut s = ColorSet::EMPTY;
        for &e in g.incident_edges(x) {
            if let Some(c) = self.colors[e] {
                s.insert(c);
            }
        }
        s
    }

    /// `F_G(xy)`: colors of the assigned edges adjacent to edge `e`
    /// (sharing an endpoint with it), excluding `e` itself.
    pub fn colors_at_edge(&self, g: &impl EdgeGraph, e: EdgeId) -> ColorSet {
        assert!(e < g.edge_count(), "unknown edge {e}");
        let (x, y) = g.endpoints(e);
        let mut s = ColorSet::EMPTY;
        for v in [x, y] {
            for &f in g.incident_edges(v) {
                if f != e {
                    if let Some(c) = self.colors[f] {
                        s.insert(c);
                    }
                }
            }
        }
        s
    }

    /// Colors of every edge, by edge id; `None` marks absent entries.
    pub fn slots(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// Union of two colorings of the same graph; overlapping assignments
    /// must agree. The error names the first disagreeing edge.
    pub fn merge(&self, other: &PartialColoring) -> Result<PartialColoring, ColoringError> {
        if self.len() != other.len() {
            return Err(ColoringError::SizeMismatch(self.len(), other.len()));
        }
        let mut out = self.clone();
        for (e, c) in other.assigned_edges() {
            match out.colors[e] {
                None => out.colors[e] = Some(c),
                Some(existing) if existing == c => {}
                Some(existing) => {
                    return Err(ColoringError::MergeConflict {
                        edge: e,
                        left: existing,
                        right: c,
                    })
                }
            }
        }
        Ok(out)
    }
}
