//! 2-D layouts: PCA for objective space (fit once on the reference set and
//! reused for every generation), exact t-SNE for decision space (fit on the
//! union of the selected generations), and a reference-point density grid.

mod density;
mod pca;
mod tsne;

pub use density::{default_bandwidth, density_grid, DensityGrid};
pub use pca::{fit_pca, project, PcaModel};
pub use tsne::{
    calibrate_affinities, fit_tsne, joint_affinities, kl_divergence, kl_gradient, EmbeddingMode, TsneConfig,
    TsneEmbedding, TsneProgress,
};
