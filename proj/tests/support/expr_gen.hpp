#pragma once

#include <random>
#include <string>

// Random expression strings over x and one bound parameter `a`, built from
// a grammar whose every production is finite and differentiable on the
// whole real line, so evaluation never needs domain guards.
namespace testgen {

class ExprGen {
public:
    explicit ExprGen(unsigned seed) : rng_(seed) {}

    std::string expression(int depth = 3) { return node(depth); }

private:
    std::string node(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(8)) {
            case 0: return leaf();
            case 1: return "(" + node(depth - 1) + "+" + node(depth - 1) + ")";
            case 2: return "(" + node(depth - 1) + "-" + node(depth - 1) + ")";
            case 3: return "(" + node(depth - 1) + "*" + node(depth - 1) + ")";
            case 4:
                return "(" + node(depth - 1) + "/(1+(" + node(depth - 1) +
                       ")^2))";
            case 5: return "(" + node(depth - 1) + ")^" + (pick(2) ? "2" : "3");
            case 6: {
                static const char* fns[] = {"sin", "cos", "asinh"};
                return std::string(fns[pick(3)]) + "(" + node(depth - 1) + ")";
            }
            default: {
                static const char* wraps[] = {"sqrt(1+(", "ln(1+(",
                                              "exp(sin("};
                static const char* tails[] = {")^2)", ")^2)", "))"};
                const int k = pick(3);
                return wraps[k] + node(depth - 1) + tails[k];
            }
        }
    }

    std::string leaf() {
        switch (pick(4)) {
            case 0: return "x";
            case 1: return "a";
            default: {
                const int tenths = 1 + pick(30);
                return std::to_string(tenths / 10) + "." +
                       std::to_string(tenths % 10);
            }
        }
    }

    int pick(int n) {
        return static_cast<int>(rng_() % static_cast<unsigned>(n));
    }

    std::mt19937 rng_;
};

} // namespace testgen
