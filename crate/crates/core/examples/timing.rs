use std::time::Instant;

use perm_depth::distribution::{table_brute, table_jfrac, table_motzkin, table_sfrac};
use perm_depth::Guard;

fn main() {
    let t = Instant::now();
    let j = table_jfrac(60).unwrap();
    println!("jfrac(60): {:?}", t.elapsed());
    let t = Instant::now();
    let s = table_sfrac(60).unwrap();
    println!("sfrac(60): {:?} agree={}", t.elapsed(), j.agrees_with(&s));
    let t = Instant::now();
    let m = table_motzkin(16, Guard::Enforced).unwrap();
    println!("motzkin(16): {:?}", t.elapsed());
    let t = Instant::now();
    let b = table_brute(9, Guard::Enforced).unwrap();
    println!("brute(9): {:?} agree={}", t.elapsed(), b.agrees_with(&m));
}
