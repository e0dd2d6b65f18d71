use blobkit::ring::{LaurentPoly, RationalFn};
fn main() {
    let d = 1;
    let two_x = LaurentPoly::lambda(d, 1).scale(&2.into());
    let two = LaurentPoly::from_int(d, 2);
    println!("gcd(2*l1, 2) = {}", two_x.gcd(&two));
    let r = RationalFn::new(two_x.clone(), two.clone()).unwrap();
    println!("2*l1/2 -> num={} den={}", r.numerator(), r.denominator());
    let six_x = LaurentPoly::lambda(d,1).scale(&6.into());
    let four = LaurentPoly::from_int(d, 4);
    let r2 = RationalFn::new(six_x, four).unwrap();
    println!("6*l1/4 -> num={} den={}", r2.numerator(), r2.denominator());
}
