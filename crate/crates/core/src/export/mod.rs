//! Emitters and loaders.

pub mod dot;
pub mod json;
pub mod layout;
pub mod svg;

pub use dot::{dot_id, edge_style, to_dot};
pub use json::{from_json, parse_json_as, to_json, to_json_value};
pub use layout::{layout_canvas, CanvasGeometry, Rect};
pub use svg::to_svg;
