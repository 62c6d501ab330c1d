pub mod balls;
pub mod error;
pub mod generate;
pub mod metric;
pub mod morphisms;
pub mod padic;
pub mod poset;
pub mod rational;
pub mod tree;
pub mod tree_metric;

pub use error::{Error, Result};
pub use metric::{
    DistanceSet, MetricSpace, MultipartitePartition, PointId, SpaceJson, UltrametricSpace,
};
pub use rational::Rational;
pub use tree::LabeledTree;
