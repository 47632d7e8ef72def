#include "teamchess/rl/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

namespace teamchess::rl {
namespace {

constexpr char kMagic[8] = {'T', 'C', 'M', 'G', 'R', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& b) : b_(b) {}

  std::uint64_t uint(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  double f64() { return std::bit_cast<double>(uint(8)); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw ParseError("checkpoint truncated");
  }
  const std::string& b_;
  std::size_t pos_ = 0;
};

std::array<int, 6> arch_fields(const ArchSpec& a) {
  return {a.layers, a.heads, a.model_dim, a.ff_dim, a.vocab, a.seq_len};
}

std::string describe(const ArchSpec& a) {
  return std::to_string(a.layers) + " layers, " + std::to_string(a.heads) + " heads, dim " +
         std::to_string(a.model_dim) + ", ff " + std::to_string(a.ff_dim);
}

nlohmann::json arch_json(const ArchSpec& a) {
  return {{"layers", a.layers}, {"heads", a.heads},   {"model_dim", a.model_dim},
          {"ff_dim", a.ff_dim}, {"vocab", a.vocab}, {"seq_len", a.seq_len}};
}

}  // namespace

std::string serialize_params(const ModelParams& p) {
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  for (int v : arch_fields(p.arch)) put_u32(out, static_cast<std::uint32_t>(v));
  std::uint32_t count = 0;
  p.visit([&](const std::string&, const auto&) { ++count; });
  put_u32(out, count);
  p.visit([&](const std::string& name, const auto& t) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(t.rows()));
    put_u32(out, static_cast<std::uint32_t>(t.cols()));
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) put_u64(out, std::bit_cast<std::uint64_t>(t(r, c)));
  });
  return out;
}

ModelParams deserialize_params(const std::string& bytes) {
  Reader in(bytes);
  if (in.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) throw ParseError("not a manager checkpoint");
  const std::uint32_t version = in.u32();
  if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  ArchSpec arch;
  arch.layers = static_cast<int>(in.u32());
  arch.heads = static_cast<int>(in.u32());
  arch.model_dim = static_cast<int>(in.u32());
  arch.ff_dim = static_cast<int>(in.u32());
  arch.vocab = static_cast<int>(in.u32());
  arch.seq_len = static_cast<int>(in.u32());
  try {
    arch.validate();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("checkpoint architecture invalid: ") + e.what());
  }
  ModelParams p = zero_params(arch);
  std::uint32_t expected_count = 0;
  p.visit([&](const std::string&, const auto&) { ++expected_count; });
  if (in.u32() != expected_count) throw ParseError("checkpoint tensor count does not match its architecture");
  p.visit([&](const std::string& name, auto& t) {
    const std::string stored = in.bytes(in.u32());
    if (stored != name) throw ParseError("checkpoint tensor '" + stored + "' where '" + name + "' was expected");
    const std::uint32_t rows = in.u32(), cols = in.u32();
    if (rows != t.rows() || cols != t.cols()) throw ParseError("checkpoint tensor " + name + " has the wrong shape");
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = in.f64();
  });
  if (!in.done()) throw ParseError("trailing bytes after checkpoint tensors");
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& p, const CheckpointMeta& meta) {
  if (!(meta.arch == p.arch)) throw ContractError("checkpoint metadata architecture differs from the parameters");
  const std::string bytes = serialize_params(p);
  write_file_atomic(path, bytes);
  const nlohmann::json side = {{"format", "teamchess-manager-checkpoint"},
                               {"version", kVersion},
                               {"arch", arch_json(meta.arch)},
                               {"seed", meta.seed},
                               {"iteration", meta.iteration},
                               {"parameter_count", p.parameter_count()},
                               {"sha256", sha256_hex(bytes)}};
  write_file_atomic(path.string() + ".json", side.dump(2) + "\n");
}

ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ArchSpec>& expected) {
  ModelParams p = deserialize_params(read_file(path));
  if (expected && !(*expected == p.arch))
    throw ConfigError("checkpoint " + path.string() + " has architecture (" + describe(p.arch) +
                      ") but the configuration asks for (" + describe(*expected) + ")");
  return p;
}

CheckpointMeta load_checkpoint_meta(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(read_file(path.string() + ".json"));
    CheckpointMeta m;
    const auto& a = j.at("arch");
    m.arch.layers = a.at("layers").get<int>();
    m.arch.heads = a.at("heads").get<int>();
    m.arch.model_dim = a.at("model_dim").get<int>();
    m.arch.ff_dim = a.at("ff_dim").get<int>();
    m.arch.vocab = a.at("vocab").get<int>();
    m.arch.seq_len = a.at("seq_len").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.iteration = j.at("iteration").get<int>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint sidecar " + path.string() + ".json: " + e.what());
  }
}

std::string params_digest(const ModelParams& p) { return sha256_hex(serialize_params(p)); }

}  // namespace teamchess::rl
