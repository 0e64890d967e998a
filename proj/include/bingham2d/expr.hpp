#pragma once

#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace bingham2d {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t offset, std::string expected);
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

  private:
    std::size_t offset_;
    std::string expected_;
};

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Arithmetic over variables x, y, t with the constant pi and the functions
// sin, cos, exp, sqrt, abs (unary), min, max, bump (binary).  Power ^ is
// right-associative and binds tighter than unary minus.  bump(a, b) is the
// smooth compactly supported plateau prod_{s in {x,y}} phi((2s-a-b)/(b-a))
// with phi(z) = exp(1 - 1/(1-z^2)) inside |z| < 1 and zero outside, so it
// vanishes with all derivatives at the edges of (a,b) x (a,b).
class Expr {
  public:
    Expr() = default;

    static Expr parse(const std::string& src);
    double eval(double x, double y, double t = 0.0) const;
    std::string pretty() const;
    bool empty() const { return root_ == nullptr; }

    // Random AST for round-trip tests.
    static Expr random(std::mt19937& rng, int max_depth);

    struct Node;

  private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace bingham2d
