pub mod flow;
pub mod graph;
pub mod lsp;
pub mod oracle;
pub mod solver;
pub mod spdecomp;
pub mod generators;
