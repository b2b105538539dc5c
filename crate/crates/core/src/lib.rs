pub mod algnum;
pub mod cli;
pub mod euclid;
pub mod expr;
pub mod hilbertlab;
pub mod numeric;
pub mod par;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod symfun;
