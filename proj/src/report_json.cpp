#include "pell/report_json.hpp"

#include <sstream>

namespace pell::verifier {

using nlohmann::ordered_json;

namespace {

std::string dec(const mpz_class& z) { return z.get_str(); }

}  // namespace

ordered_json report_to_json(const VerificationReport& r, bool include_timings) {
    ordered_json j;
    j["schema"] = 1;
    j["b"] = dec(r.b);
    j["status"] = status_name(r.status);
    if (!r.reason.empty()) j["reason"] = r.reason;
    if (r.epsilon) {
        j["epsilon"] = {{"u", dec(r.epsilon->u())},
                        {"v", dec(r.epsilon->v())},
                        {"denom", r.epsilon->denom()},
                        {"norm", dec(r.epsilon->norm())}};
        j["c_m"] = dec(r.c_m);
        j["c_n1"] = dec(r.c_n1);
        j["witness_q"] = dec(r.witness_q);
    }
    j["candidates"] = ordered_json::array();
    for (const auto& c : r.candidates) {
        ordered_json jc{{"n", c.n}, {"x", dec(c.x)}};
        jc["skipped"] = c.skipped ? ordered_json(*c.skipped) : ordered_json(nullptr);
        j["candidates"].push_back(std::move(jc));
    }
    j["reductions"] = ordered_json::array();
    for (const auto& red : r.reductions) {
        ordered_json jr{{"n", red.n}, {"l", red.l}, {"q_k", dec(red.q_k)},
                        {"kappa", red.kappa}};
        jr["bound"] = red.bound ? ordered_json(dec(*red.bound)) : ordered_json(nullptr);
        j["reductions"].push_back(std::move(jr));
    }
    j["pairs"] = ordered_json::array();
    for (const auto& p : r.pairs) {
        ordered_json jp{{"n", p.n},
                        {"n_prime", p.n_prime},
                        {"x", dec(p.x)},
                        {"x_prime", dec(p.x_prime)},
                        {"recovery_partial", p.recovery_partial}};
        jp["recovered"] = ordered_json::array();
        for (const auto& t : p.recovered)
            jp["recovered"].push_back({{"a", dec(t.a)},
                                       {"y", dec(t.y)},
                                       {"y_prime", dec(t.y_prime)},
                                       {"z", dec(t.z)},
                                       {"z_prime", dec(t.z_prime)}});
        j["pairs"].push_back(std::move(jp));
    }
    if (include_timings) {
        ordered_json jt;
        for (const auto& [k, v] : r.timings_ms) jt[k] = v;
        j["timings_ms"] = std::move(jt);
    }
    return j;
}

std::string report_to_text(const VerificationReport& r) {
    std::ostringstream out;
    out << "b = " << r.b << ": " << status_name(r.status);
    if (!r.reason.empty()) out << " (" << r.reason << ")";
    out << "\n";
    if (r.epsilon) {
        out << "  epsilon = (" << r.epsilon->u() << " + " << r.epsilon->v()
            << "*sqrt(" << r.b << "))";
        if (r.epsilon->denom() == 2) out << "/2";
        out << ", norm " << r.epsilon->norm() << "\n";
        out << "  c_m = " << r.c_m << ", c_n1 = " << r.c_n1
            << " (witness q_k = " << r.witness_q << ")\n";
    }
    std::size_t kept = 0;
    for (const auto& c : r.candidates)
        if (!c.skipped) ++kept;
    out << "  candidates: " << r.candidates.size() << " examined, " << kept
        << " kept";
    for (const auto& c : r.candidates)
        if (!c.skipped) out << "  x_" << c.n << " = " << c.x;
    out << "\n";
    out << "  reductions: " << r.reductions.size() << ", pairs: " << r.pairs.size()
        << "\n";
    for (const auto& p : r.pairs) {
        out << "  PAIR x_" << p.n << " = " << p.x << ", x_" << p.n_prime << " = "
            << p.x_prime << "\n";
        for (const auto& t : p.recovered)
            out << "    a = " << t.a << ", y = " << t.y << ", y' = " << t.y_prime
                << ", z = " << t.z << ", z' = " << t.z_prime << "\n";
    }
    return out.str();
}

}  // namespace pell::verifier
