// Decides both orderings for the first antecedent and consequent values at
// the root of a proof file and prints the verdicts.
//
//   sample_order proof.json

#include <iostream>

#include "cep/cep.hpp"

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: " << argv[0] << " proof.json\n";
        return 2;
    }
    try {
        const cep::ProofGraph p = cep::load_proof_graph(argv[1]);
        const cep::Node& root = p.node(p.root());
        if (root.ant_values.empty() || root.con_values.empty()) {
            std::cerr << "root has no trace values\n";
            return 1;
        }
        const cep::TracePairQuery q{p.root(), root.ant_values.front(), root.con_values.front()};
        const std::string ant = p.value_name(q.ant_value), con = p.value_name(q.con_value);

        for (bool strict : {false, true}) {
            const cep::OrderVerdict v = cep::decide_order(p, q, strict);
            std::cout << con << (strict ? " < " : " <= ") << ant << " at " << root.name << ": " << cep::to_string(v.status)
                      << " (" << v.reason << ")\n";
            if (v.containment && v.containment->counterexample) {
                const cep::Counterexample& c = *v.containment->counterexample;
                std::cout << "  word";
                for (const std::string& l : c.word)
                    std::cout << ' ' << l;
                std::cout << ": consequent " << c.b_value.to_string() << ", antecedent " << c.a_value.to_string() << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
