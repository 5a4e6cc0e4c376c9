// Command-line driver: key generation, seal/verify pipelines over files,
// the benchmark matrix, and the breach-simulation drill.

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphene/bench.hpp"
#include "graphene/breach.hpp"
#include "graphene/graphene.hpp"

using namespace graphene;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitForbidden = 3;
constexpr int kExitIo = 4;

Instantiation parse_instantiation(const std::string& name) {
    if (name == "std" || name == "std-faae" || name == "1")
        return Instantiation::std_faae;
    if (name == "ae" || name == "graphene-ae" || name == "2")
        return Instantiation::graphene_ae;
    if (name == "poly" || name == "graphene-poly" || name == "3")
        return Instantiation::graphene_poly;
    fail(ErrorKind::invalid_config, "unknown instantiation '" + name + "'");
}

AggMode parse_agg(const std::string& name) {
    if (name == "hash" || name == "1") return AggMode::hash;
    if (name == "xor" || name == "2") return AggMode::xor_fold;
    if (name == "addq" || name == "add_q" || name == "3") return AggMode::add_q;
    fail(ErrorKind::invalid_config, "unknown aggregation mode '" + name + "'");
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              std::streamsize(data.size()));
    if (!out) fail(ErrorKind::io, "short write to " + path);
}

/// Bounded in-process queue linking the sender and verifier threads.
class WireQueue {
public:
    void push(Bytes frame) {
        std::unique_lock<std::mutex> lock(mu_);
        cv_space_.wait(lock, [&] { return frames_.size() < 8; });
        frames_.push_back(std::move(frame));
        cv_data_.notify_one();
    }

    std::optional<Bytes> pop() {
        std::unique_lock<std::mutex> lock(mu_);
        cv_data_.wait(lock, [&] { return !frames_.empty() || done_; });
        if (frames_.empty()) return std::nullopt;
        Bytes out = std::move(frames_.front());
        frames_.pop_front();
        cv_space_.notify_one();
        return out;
    }

    void close() {
        std::lock_guard<std::mutex> lock(mu_);
        done_ = true;
        cv_data_.notify_all();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_data_, cv_space_;
    std::deque<Bytes> frames_;
    bool done_ = false;
};

struct KeygenArgs {
    std::uint32_t kappa = 128;
    std::uint64_t n = 1024;
    std::string inst = "poly";
    std::string agg;
    std::string seed_hex;
    std::uint32_t max_msg_len = 16;
    std::optional<bool> enc_oo, mac_oo;
    std::string out_prefix = "graphene";
};

int cmd_keygen(const KeygenArgs& a) {
    auto cfg = InstantiationConfig::defaults(parse_instantiation(a.inst), a.n,
                                             a.max_msg_len);
    cfg.kappa = a.kappa;
    if (!a.agg.empty()) cfg.b_agg = parse_agg(a.agg);
    if (a.enc_oo) cfg.b_enc_oo = *a.enc_oo;
    if (a.mac_oo) cfg.b_mac_oo = *a.mac_oo;
    cfg.validate();

    KeyState root = a.seed_hex.empty() ? kg(cfg) : kg_seeded(cfg, from_hex(a.seed_hex));
    Bytes record = export_key_state(root);
    // pre-shared key model: sender and verifier start from the same record
    write_file(a.out_prefix + ".sender.gks", record);
    write_file(a.out_prefix + ".verifier.gks", record);
    root.wipe();
    secure_wipe(record);
    std::cout << "wrote " << a.out_prefix << ".sender.gks and " << a.out_prefix
              << ".verifier.gks (" << instantiation_name(cfg.instantiation)
              << ", kappa=" << cfg.kappa << ", n=" << cfg.n << ")\n";
    return kExitOk;
}

struct PipelineArgs {
    std::string inst = "poly";
    std::uint64_t n = 1024;
    std::string in_path;
    std::uint32_t msg_len = 16;
    std::string agg;
    std::string seed_hex;
    std::string sender_keys, verifier_keys;
    std::string out_path;
    std::string tamper;  // window:byte:bit
};

int cmd_pipeline(const PipelineArgs& a) {
    auto cfg = InstantiationConfig::defaults(parse_instantiation(a.inst), a.n,
                                             a.msg_len);
    if (!a.agg.empty()) cfg.b_agg = parse_agg(a.agg);
    cfg.validate();

    KeyState sender_root, verifier_root;
    if (!a.sender_keys.empty() || !a.verifier_keys.empty()) {
        if (a.sender_keys.empty() || a.verifier_keys.empty())
            fail(ErrorKind::invalid_config, "need both --sender and --verifier keys");
        sender_root = import_key_state(read_file(a.sender_keys));
        verifier_root = import_key_state(read_file(a.verifier_keys));
    } else {
        Bytes seed = a.seed_hex.empty() ? Bytes{'p', 'i', 'p', 'e'} : from_hex(a.seed_hex);
        sender_root = kg_seeded(cfg, seed);
        verifier_root = sender_root;
    }

    Bytes input = read_file(a.in_path);
    if (a.msg_len == 0 || input.size() % a.msg_len != 0)
        fail(ErrorKind::invalid_config, "input is not a whole number of messages");
    std::size_t total_msgs = input.size() / a.msg_len;
    if (total_msgs == 0 || total_msgs % cfg.n != 0)
        fail(ErrorKind::invalid_config,
             "input must partition into full windows of n messages; got " +
                 std::to_string(total_msgs) + " (partial windows are rejected)");
    std::size_t windows = total_msgs / cfg.n;

    long tamper_window = -1;
    std::size_t tamper_byte = 0;
    int tamper_bit = 0;
    if (!a.tamper.empty()) {
        if (std::sscanf(a.tamper.c_str(), "%ld:%zu:%d", &tamper_window, &tamper_byte,
                        &tamper_bit) != 3 ||
            tamper_window < 0 || tamper_bit < 0 || tamper_bit > 7)
            fail(ErrorKind::invalid_config, "--tamper expects window:byte:bit");
    }

    // sender thread: precompute, seal, encode, transmit
    WireQueue queue;
    std::exception_ptr sender_error;
    std::thread sender_thread([&] {
        try {
            Engine sender(cfg, sender_root);
            for (std::size_t w = 0; w < windows; ++w) {
                Batch batch;
                batch.start_index = sender.window_start();
                for (std::uint64_t k = 0; k < cfg.n; ++k) {
                    auto off = (w * cfg.n + k) * a.msg_len;
                    batch.items.emplace_back(input.begin() + long(off),
                                             input.begin() + long(off + a.msg_len));
                }
                if (cfg.offline_online()) sender.precompute_window();
                Bytes frame = encode_batch(sender.seal(batch));
                if (long(w) == tamper_window) {
                    if (tamper_byte >= frame.size())
                        fail(ErrorKind::invalid_config, "tamper offset beyond frame");
                    frame[tamper_byte] ^= std::uint8_t(1 << tamper_bit);
                }
                queue.push(std::move(frame));
            }
        } catch (...) {
            sender_error = std::current_exception();
        }
        queue.close();
    });

    // verifier side: decode, verify, decrypt, compare
    Engine verifier(cfg, verifier_root);
    Bytes recovered;
    std::size_t window_index = 0;
    int status = kExitOk;
    std::string failure;
    while (auto frame = queue.pop()) {
        try {
            SealedBatch sealed = decode_batch(*frame);
            std::vector<Bytes> plain = verifier.verdec(sealed);
            for (const auto& m : plain)
                recovered.insert(recovered.end(), m.begin(), m.end());
        } catch (const Error& e) {
            status = kExitVerification;
            failure = "window " + std::to_string(window_index) + ": " + e.what();
            break;
        }
        ++window_index;
    }
    queue.close();
    sender_thread.join();
    if (sender_error) std::rethrow_exception(sender_error);

    if (status != kExitOk) {
        std::cerr << failure << "\n";
        return status;
    }
    if (recovered != input) {
        std::cerr << "recovered plaintext differs from input\n";
        return kExitVerification;
    }
    if (!a.out_path.empty()) write_file(a.out_path, recovered);
    std::cout << windows << " windows verified, " << total_msgs
              << " messages round-tripped (" << instantiation_name(cfg.instantiation)
              << ")\n";
    return kExitOk;
}

struct BenchArgs {
    std::string grid = "16,32,128,256x1,16,1024";
    std::string inst_list = "std,ae,poly";
    std::size_t reps = 100;
    std::string csv_path;
};

template <typename T>
std::vector<T> parse_list(const std::string& csv) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(T(std::stoull(csv.substr(pos, comma - pos))));
        pos = comma + 1;
    }
    if (out.empty()) fail(ErrorKind::invalid_config, "empty list");
    return out;
}

int cmd_bench(const BenchArgs& a) {
    if (a.reps == 0) fail(ErrorKind::invalid_config, "repetitions must be positive");
    auto x = a.grid.find('x');
    if (x == std::string::npos)
        fail(ErrorKind::invalid_config, "--grid expects MSGLENSxBATCHES");
    auto msg_lens = parse_list<std::uint32_t>(a.grid.substr(0, x));
    auto batch_ns = parse_list<std::uint64_t>(a.grid.substr(x + 1));

    std::vector<Instantiation> insts;
    std::size_t pos = 0;
    while (pos < a.inst_list.size()) {
        std::size_t comma = a.inst_list.find(',', pos);
        if (comma == std::string::npos) comma = a.inst_list.size();
        insts.push_back(parse_instantiation(a.inst_list.substr(pos, comma - pos)));
        pos = comma + 1;
    }

    auto records = bench_grid(insts, msg_lens, batch_ns, a.reps);

    std::ofstream csv;
    if (!a.csv_path.empty()) {
        csv.open(a.csv_path);
        if (!csv) fail(ErrorKind::io, "cannot write " + a.csv_path);
        csv << "instantiation,phase,msg_len,n,ns_per_op,table_bytes,ratio_vs_std\n";
    }

    std::printf("| %-13s | %-14s | %7s | %5s | %12s | %11s | %9s |\n", "instantiation",
                "phase", "msg_len", "n", "ns_per_op", "table_bytes", "vs_std");
    std::printf("|---------------|----------------|---------|-------|--------------|"
                "-------------|-----------|\n");
    for (const auto& r : records) {
        double ratio = ratio_vs_std(records, r);
        std::printf("| %-13s | %-14s | %7u | %5llu | %12.1f | %11zu | %9.2f |\n",
                    instantiation_name(r.instantiation), bench_phase_name(r.phase),
                    r.msg_len, static_cast<unsigned long long>(r.n), r.ns_per_op,
                    r.table_bytes, ratio);
        if (csv.is_open()) {
            csv << instantiation_name(r.instantiation) << ',' << bench_phase_name(r.phase)
                << ',' << r.msg_len << ',' << r.n << ',' << r.ns_per_op << ','
                << r.table_bytes << ',' << ratio << '\n';
        }
    }
    return kExitOk;
}

struct BreachArgs {
    std::uint64_t j_prime = 0;
    std::uint64_t n = 8;
    std::string inst = "poly";
    std::uint32_t msg_len = 16;
    std::string seed_hex = "6272";
};

int cmd_breach(const BreachArgs& a) {
    const char* allow = std::getenv("GRAPHENE_ALLOW_SNAPSHOT");
    if (!allow || std::string(allow) != "1")
        fail(ErrorKind::forbidden,
             "breach simulation requires GRAPHENE_ALLOW_SNAPSHOT=1");

    // decompose the absolute compromise index into the window layout
    // (windows start at 1 with stride n+1 on the offline-online path)
    std::uint64_t stride = a.n + 1;
    if (a.j_prime < 1) fail(ErrorKind::invalid_config, "--j must be >= 1");
    std::uint64_t w = (a.j_prime - 1) / stride;
    std::uint64_t start = w * stride + 1;
    std::uint64_t sealed = std::min(a.j_prime - start, a.n);
    if (w < 2)
        fail(ErrorKind::invalid_config,
             "--j must land beyond the first two in-transit windows (j >= " +
                 std::to_string(2 * stride + 1) + ")");

    BreachReport r = run_breach_simulation(parse_instantiation(a.inst), a.n, sealed,
                                           a.msg_len, from_hex(a.seed_hex),
                                           /*prior_windows=*/std::size_t(w));

    json out = {
        {"compromise_index", r.compromise_index},
        {"window_start", r.window_start},
        {"n", r.n},
        {"snapshot_bytes", r.snapshot_bytes},
        {"candidate_keys", r.candidate_keys},
        {"prior_ciphertexts", r.prior_ciphertexts},
        {"decryption", {{"attempts", r.decryption_attempts},
                        {"successes", r.decryption_successes}}},
        {"forgery", {{"attempts", r.forgery_attempts},
                     {"successes", r.forgery_successes}}},
        {"consumed_material_absent", r.consumed_material_absent},
        {"honest_batches_still_verify", r.honest_batches_still_verify},
        {"all_attacks_failed", r.all_attacks_failed()},
    };
    std::cout << out.dump(2) << "\n";
    return r.all_attacks_failed() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forward-secure aggregate authenticated encryption for batched telemetry"};
    app.require_subcommand(1);

    KeygenArgs kg_args;
    auto* kgc = app.add_subcommand("keygen", "generate a pre-shared root key pair");
    kgc->add_option("--kappa", kg_args.kappa, "security bits (128 or 256)");
    kgc->add_option("--n", kg_args.n, "batch size");
    kgc->add_option("--inst", kg_args.inst, "std | ae | poly");
    kgc->add_option("--agg", kg_args.agg, "hash | xor | addq");
    kgc->add_option("--seed", kg_args.seed_hex, "hex seed for deterministic keys");
    kgc->add_option("--max-msg-len", kg_args.max_msg_len, "per-message size cap");
    kgc->add_option("--enc-oo", kg_args.enc_oo, "override ENC offline flag");
    kgc->add_option("--mac-oo", kg_args.mac_oo, "override MAC offline flag");
    kgc->add_option("--out", kg_args.out_prefix, "output file prefix");

    PipelineArgs pipe_args;
    auto* pc = app.add_subcommand("pipeline",
                                  "seal, transmit, verify and decrypt a message file");
    pc->add_option("--inst", pipe_args.inst, "std | ae | poly");
    pc->add_option("--n", pipe_args.n, "batch size");
    pc->add_option("--in", pipe_args.in_path, "input file of concatenated messages")
        ->required();
    pc->add_option("--msg-len", pipe_args.msg_len, "bytes per message record");
    pc->add_option("--agg", pipe_args.agg, "hash | xor | addq");
    pc->add_option("--seed", pipe_args.seed_hex, "hex seed for ephemeral keys");
    pc->add_option("--sender", pipe_args.sender_keys, "sender key file");
    pc->add_option("--verifier", pipe_args.verifier_keys, "verifier key file");
    pc->add_option("--out", pipe_args.out_path, "write verified plaintexts here");
    pc->add_option("--tamper", pipe_args.tamper,
                   "flip one bit in transit: window:byte:bit");

    BenchArgs bench_args;
    auto* bc = app.add_subcommand("bench", "run the benchmark matrix");
    bc->add_option("--grid", bench_args.grid, "MSGLENSxBATCHES, e.g. 16,32x16,1024");
    bc->add_option("--inst", bench_args.inst_list, "comma-separated instantiations");
    bc->add_option("--reps", bench_args.reps, "repetitions per cell");
    bc->add_option("--csv", bench_args.csv_path, "also write CSV here");

    BreachArgs breach_args;
    auto* brc = app.add_subcommand("breach", "simulate a mid-window key compromise");
    brc->add_option("--j", breach_args.j_prime, "absolute compromise index j'")
        ->required();
    brc->add_option("--n", breach_args.n, "batch size");
    brc->add_option("--inst", breach_args.inst, "ae | poly");
    brc->add_option("--len", breach_args.msg_len, "message length");
    brc->add_option("--seed", breach_args.seed_hex, "hex seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kgc->parsed()) return cmd_keygen(kg_args);
        if (pc->parsed()) return cmd_pipeline(pipe_args);
        if (bc->parsed()) return cmd_bench(bench_args);
        if (brc->parsed()) return cmd_breach(breach_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::forbidden: return kExitForbidden;
            case ErrorKind::io: return kExitIo;
            case ErrorKind::verification_failed: return kExitVerification;
            default: return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
