#include "fogopt/trace.hpp"

#include <json.hpp>

namespace fogopt {

const char* to_string(MessageKind k) {
    switch (k) {
        case MessageKind::service_vector: return "service_vector";
        case MessageKind::dual_broadcast: return "dual_broadcast";
        case MessageKind::psi_slice: return "psi_slice";
        case MessageKind::arrival_rate: return "arrival_rate";
        case MessageKind::terminate: return "terminate";
    }
    return "?";
}

void write_trace_csv(const SolveTrace& t, std::ostream& os, bool include_timings) {
    os << "# units: objective seconds; residuals and dual_norm workload-units/s; ms milliseconds\n";
    os << "iter,objective,primal_residual,dual_residual,dual_norm,ms\n";
    const auto old_precision = os.precision(17);
    for (const auto& r : t.records) {
        os << r.iter << ',' << r.objective << ',' << r.primal_residual << ','
           << r.dual_residual << ',' << r.dual_norm << ','
           << (include_timings ? r.wall_ms : 0.0) << '\n';
    }
    os.precision(old_precision);
}

void write_transcript_jsonl(const SolveTrace& t, std::ostream& os) {
    for (const auto& m : t.transcript) {
        nlohmann::json j = {{"iter", m.iteration},
                            {"from", m.sender},
                            {"to", m.receiver},
                            {"kind", to_string(m.kind)},
                            {"payload", m.payload}};
        os << j.dump() << '\n';
    }
}

}  // namespace fogopt
