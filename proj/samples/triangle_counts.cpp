// Prints the Ehrhart quasi-polynomial of a half-integral triangle and the
// sum of x1 over its dilations, next to brute-force values.

#include <iostream>

#include "ehrhart/ehrhart.hpp"

int main() {
  using namespace ehrhart;
  const RationalSimplex p({make_vector({0, 0}), {Rational(1, 2), Rational(0)}, {Rational(0), Rational(3, 2)}});
  for (const auto& h : {WeightPoly::one(2), decompose_monomial({1, 0})}) {
    const QuasiPolynomial qp = ehrhart_quasipolynomial(p, h);
    for (long k = 0; k < qp.period; ++k) {
      std::cout << "n = " << qp.period << "u + " << k << ":";
      for (const auto& c : qp.residue_polys[k]) std::cout << " " << to_string(c);
      std::cout << "\n";
    }
    for (long n = 0; n <= 6; ++n)
      std::cout << "  n=" << n << " engine " << to_string(qp.evaluate(n)) << " oracle "
                << to_string(weighted_sum_oracle(p, h, n).value) << "\n";
  }
}
