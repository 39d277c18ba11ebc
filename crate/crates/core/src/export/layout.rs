//! Fixed nine-block canvas geometry.
//!
//! ```text
//!  0        240       480       720       960      1200
//!  +---------+---------+---------+---------+---------+ 0
//!  |         |   KA    |         |   CR    |         |
//!  |   KP    +---------+   VP    +---------+   CS    | 320
//!  |         |   KR    |         |   CH    |         |
//!  +---------+---------+----+----+---------+---------+ 640
//!  |         C$             |          R$            |
//!  +------------------------+------------------------+ 800
//! ```

use std::collections::HashMap;

use crate::model::{BusinessModel, ElementId, ElementKind, RelationshipKind};
use crate::rules::{edge_rule, RuleId};

pub const CANVAS_WIDTH: f64 = 1200.0;
pub const CANVAS_HEIGHT: f64 = 800.0;
pub const TOP_HEIGHT: f64 = 640.0;
pub const COLUMN_WIDTH: f64 = 240.0;
pub const HEADER: f64 = 28.0;
pub const PAD: f64 = 8.0;
pub const ELEMENT_HEIGHT: f64 = 36.0;
pub const GAP: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub const fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        Rect { x, y, width, height }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.width / 2.0, self.y + self.height / 2.0)
    }

    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x >= self.x && other.y >= self.y && other.right() <= self.right() && other.bottom() <= self.bottom()
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x < other.right() && other.x < self.right() && self.y < other.bottom() && other.y < self.bottom()
    }
}

/// The block rectangle of a kind.
pub fn block_rect(kind: ElementKind) -> Rect {
    let half = TOP_HEIGHT / 2.0;
    let bottom = CANVAS_HEIGHT - TOP_HEIGHT;
    match kind {
        ElementKind::KeyPartnership => Rect::new(0.0, 0.0, COLUMN_WIDTH, TOP_HEIGHT),
        ElementKind::KeyActivity => Rect::new(COLUMN_WIDTH, 0.0, COLUMN_WIDTH, half),
        ElementKind::KeyResource => Rect::new(COLUMN_WIDTH, half, COLUMN_WIDTH, half),
        ElementKind::ValueProposition => Rect::new(2.0 * COLUMN_WIDTH, 0.0, COLUMN_WIDTH, TOP_HEIGHT),
        ElementKind::CustomerRelationship => Rect::new(3.0 * COLUMN_WIDTH, 0.0, COLUMN_WIDTH, half),
        ElementKind::Channel => Rect::new(3.0 * COLUMN_WIDTH, half, COLUMN_WIDTH, half),
        ElementKind::CustomerSegment => Rect::new(4.0 * COLUMN_WIDTH, 0.0, COLUMN_WIDTH, TOP_HEIGHT),
        ElementKind::CostStructure => Rect::new(0.0, TOP_HEIGHT, CANVAS_WIDTH / 2.0, bottom),
        ElementKind::RevenueStream => Rect::new(CANVAS_WIDTH / 2.0, TOP_HEIGHT, CANVAS_WIDTH / 2.0, bottom),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub kind: ElementKind,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedElement {
    pub id: ElementId,
    pub kind: ElementKind,
    pub name: String,
    pub rect: Rect,
    /// 0 for top-level elements.
    pub depth: usize,
}

/// Stands in for the elements of a block that did not fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Overflow {
    pub kind: ElementKind,
    pub hidden: usize,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedEdge {
    pub source: ElementId,
    pub target: ElementId,
    pub kind: RelationshipKind,
    pub rule: RuleId,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanvasGeometry {
    pub width: f64,
    pub height: f64,
    /// All nine, in kind order.
    pub blocks: Vec<Block>,
    /// Visible elements in declaration pre-order.
    pub elements: Vec<PlacedElement>,
    pub overflow: Vec<Overflow>,
    /// One per relationship, in model order.
    pub edges: Vec<PlacedEdge>,
}

impl CanvasGeometry {
    pub fn block(&self, kind: ElementKind) -> &Block {
        &self.blocks[kind.index()]
    }

    pub fn element(&self, id: &str) -> Option<&PlacedElement> {
        self.elements.iter().find(|e| e.id.as_str() == id)
    }
}

/// How many elements one column of `block` holds.
pub fn column_capacity(block: &Rect) -> usize {
    let usable = block.height - HEADER - PAD;
    ((usable + GAP) / (ELEMENT_HEIGHT + GAP)).floor().max(1.0) as usize
}

/// Vertically centred stack of `count` slots, never above the header.
fn stack_top(block: &Rect, count: usize) -> f64 {
    let n = count as f64;
    let height = n * ELEMENT_HEIGHT + (n - 1.0).max(0.0) * GAP;
    (block.y + (block.height - height) / 2.0).max(block.y + HEADER)
}

fn slot(block: &Rect, column: usize, columns: usize, row: usize, in_column: usize) -> Rect {
    let width = (block.width - PAD * (columns as f64 + 1.0)) / columns as f64;
    let x = block.x + PAD + column as f64 * (width + PAD);
    let y = stack_top(block, in_column) + row as f64 * (ELEMENT_HEIGHT + GAP);
    Rect::new(x, y, width, ELEMENT_HEIGHT)
}

pub fn layout_canvas(bm: &BusinessModel) -> CanvasGeometry {
    let blocks: Vec<Block> = ElementKind::ALL
        .into_iter()
        .map(|kind| Block { kind, rect: block_rect(kind) })
        .collect();

    let mut by_kind: HashMap<ElementKind, Vec<_>> = HashMap::new();
    let walk = bm.walk_elements();
    for (i, (e, _)) in walk.iter().enumerate() {
        by_kind.entry(e.kind).or_default().push(i);
    }

    let mut placed: Vec<Option<Rect>> = vec![None; walk.len()];
    let mut overflow = Vec::new();
    for kind in ElementKind::ALL {
        let Some(indices) = by_kind.get(&kind) else { continue };
        let rect = block_rect(kind);
        let cap = column_capacity(&rect);
        let count = indices.len();
        if count <= cap {
            for (row, &i) in indices.iter().enumerate() {
                placed[i] = Some(slot(&rect, 0, 1, row, count));
            }
            continue;
        }
        let shown = if count <= 2 * cap { count } else { 2 * cap - 1 };
        for (n, &i) in indices.iter().take(shown).enumerate() {
            let (column, row) = (n / cap, n % cap);
            // the marker occupies the last slot of a clipped block
            let in_column = if column == 0 || shown < count { cap } else { shown - cap };
            placed[i] = Some(slot(&rect, column, 2, row, in_column));
        }
        if shown < count {
            overflow.push(Overflow {
                kind,
                hidden: count - shown,
                rect: slot(&rect, 1, 2, cap - 1, cap),
            });
        }
    }

    let mut centers: HashMap<&str, (f64, f64)> = HashMap::new();
    let mut elements = Vec::new();
    for (i, (e, depth)) in walk.iter().enumerate() {
        let rect = match placed[i] {
            Some(rect) => rect,
            None => {
                let marker = overflow.iter().find(|o| o.kind == e.kind).expect("clipped means marker");
                centers.insert(e.id.as_str(), marker.rect.center());
                continue;
            }
        };
        centers.insert(e.id.as_str(), rect.center());
        elements.push(PlacedElement {
            id: e.id.clone(),
            kind: e.kind,
            name: e.name.clone(),
            rect,
            depth: *depth,
        });
    }

    let edges = bm
        .relationships
        .iter()
        .map(|r| {
            let kinds = (bm.resolve(r.source.as_str()), bm.resolve(r.target.as_str()));
            let rule = match kinds {
                (Some(s), Some(t)) => edge_rule(s.kind, t.kind, r.is_self_edge()),
                _ => RuleId::Matrix,
            };
            let from = centers.get(r.source.as_str()).copied().unwrap_or((0.0, 0.0));
            let to = centers.get(r.target.as_str()).copied().unwrap_or((0.0, 0.0));
            PlacedEdge {
                source: r.source.clone(),
                target: r.target.clone(),
                kind: r.kind,
                rule,
                points: vec![from, to],
            }
        })
        .collect();

    CanvasGeometry {
        width: CANVAS_WIDTH,
        height: CANVAS_HEIGHT,
        blocks,
        elements,
        overflow,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_tile_the_canvas() {
        let g = layout_canvas(&BusinessModel::new("B"));
        let area: f64 = g.blocks.iter().map(|b| b.rect.width * b.rect.height).sum();
        assert_eq!(area, CANVAS_WIDTH * CANVAS_HEIGHT);
        let canvas = Rect::new(0.0, 0.0, CANVAS_WIDTH, CANVAS_HEIGHT);
        for (i, a) in g.blocks.iter().enumerate() {
            assert!(canvas.contains(&a.rect));
            for b in &g.blocks[i + 1..] {
                assert!(!a.rect.overlaps(&b.rect), "{:?} {:?}", a.kind, b.kind);
            }
        }
    }

    #[test]
    fn capacities() {
        assert_eq!(column_capacity(&block_rect(ElementKind::KeyPartnership)), 13);
        assert_eq!(column_capacity(&block_rect(ElementKind::KeyResource)), 6);
        assert_eq!(column_capacity(&block_rect(ElementKind::CostStructure)), 3);
    }

    #[test]
    fn single_elements_are_centred() {
        let mut bm = BusinessModel::new("B");
        for (i, kind) in ElementKind::ALL.into_iter().enumerate() {
            bm.add_element(kind, &format!("E{i}"), "x").unwrap();
        }
        let g = layout_canvas(&bm);
        for e in &g.elements {
            let block = g.block(e.kind).rect;
            assert_eq!(e.rect.center(), block.center(), "{:?}", e.kind);
        }
    }

    #[test]
    fn overflow_goes_to_second_column_then_clips() {
        let mut bm = BusinessModel::new("B");
        for i in 0..8 {
            bm.add_element(ElementKind::CostStructure, &format!("C{i}"), "c").unwrap();
        }
        let g = layout_canvas(&bm);
        assert_eq!(g.elements.len(), 5);
        assert_eq!(g.overflow.len(), 1);
        assert_eq!(g.overflow[0].hidden, 3);
        let block = block_rect(ElementKind::CostStructure);
        for e in &g.elements {
            assert!(block.contains(&e.rect));
        }
        assert!(block.contains(&g.overflow[0].rect));
        let x0 = g.elements[0].rect.x;
        assert!(g.elements[3].rect.x > x0);

        let mut bm = BusinessModel::new("B");
        for i in 0..5 {
            bm.add_element(ElementKind::CostStructure, &format!("C{i}"), "c").unwrap();
        }
        let g = layout_canvas(&bm);
        assert_eq!(g.elements.len(), 5);
        assert!(g.overflow.is_empty());
        for (i, a) in g.elements.iter().enumerate() {
            for b in &g.elements[i + 1..] {
                assert!(!a.rect.overlaps(&b.rect));
            }
        }
    }

    #[test]
    fn edges_follow_midpoints() {
        let mut bm = BusinessModel::new("B");
        bm.add_element(ElementKind::KeyResource, "F", "Factory").unwrap();
        bm.add_element(ElementKind::KeyActivity, "P", "Production").unwrap();
        bm.add_relationship("F", "P", RelationshipKind::Supports, None).unwrap();
        let g = layout_canvas(&bm);
        let e = &g.edges[0];
        assert_eq!(e.points, vec![g.element("F").unwrap().rect.center(), g.element("P").unwrap().rect.center()]);
        assert_eq!(e.rule, RuleId::Dr2);
    }
}
