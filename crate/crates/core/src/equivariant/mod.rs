pub mod algebroid;
pub mod kalkman;
pub mod lie;
pub mod mq;
pub mod poisson;
pub mod weil;
