#ifndef FOGOPT_TRACE_HPP_
#define FOGOPT_TRACE_HPP_

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogopt {

enum class MessageKind {
    service_vector,   // agent -> WFC: its service column, cloud entry, lambda_i
    dual_broadcast,   // WFC -> agent: duals, arrival-rate vector, total arrival
    psi_slice,        // WFC -> agent: its psi column slice and dual column slice
    arrival_rate,     // agent -> WFC: lambda_i (registration)
    terminate,        // WFC -> agent
};

const char* to_string(MessageKind k);

struct Message {
    int iteration = 0;
    std::string sender;
    std::string receiver;
    MessageKind kind = MessageKind::terminate;
    std::vector<double> payload;
};

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;        // seconds, evaluated off-wire by the harness
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double dual_norm = 0.0;
    double wall_ms = 0.0;
};

struct SolveTrace {
    std::vector<IterationRecord> records;
    std::vector<Message> transcript;
};

/// Solver failure that still carries whatever trace was accumulated.
class SolveError : public std::runtime_error {
 public:
    SolveError(const std::string& what, SolveTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const SolveTrace& trace() const { return trace_; }

 private:
    SolveTrace trace_;
};

// CSV header is fixed: iter,objective,primal_residual,dual_residual,dual_norm,ms
// A leading '#' comment line names the units. With include_timings=false the ms
// column is written as 0 so identical runs produce identical bytes.
void write_trace_csv(const SolveTrace& t, std::ostream& os, bool include_timings = false);

/// JSON lines, one message per line: {iter, from, to, kind, payload}.
void write_transcript_jsonl(const SolveTrace& t, std::ostream& os);

}  // namespace fogopt

#endif  // FOGOPT_TRACE_HPP_
