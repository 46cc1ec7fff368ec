//! Largest positional certificate per generation of both antimonotone
//! schemes, closed-form graphs next to the copy construction.

use pfxd::bench::antimonotone_sizes;
use pfxd::schemes::Arity;

fn main() {
    println!("{}", antimonotone_sizes(Arity::Binary, 9));
    println!("{}", antimonotone_sizes(Arity::Ternary, 6));
}
