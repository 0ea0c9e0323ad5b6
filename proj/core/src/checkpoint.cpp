#include "alphalab/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "alphalab/csv.hpp"

namespace alphalab::checkpoint {

namespace {

template <typename T>
void put(std::string& out, T value) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    bool done() const { return pos_ == bytes_.size(); }

    template <typename T>
    T get() {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    void magic() {
        need(4);
        if (std::memcmp(bytes_.data() + pos_, kMagic, 4) != 0) throw PreconditionError("checkpoint: bad magic");
        pos_ += 4;
    }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw PreconditionError("checkpoint: truncated record");
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const models::ModelParams& params) {
    params.validate();
    std::string out(kMagic, 4);
    put<std::uint16_t>(out, kVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(params.kind));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.dims.size()));
    for (auto d : params.dims) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    put<std::uint64_t>(out, params.seed);
    put<std::uint64_t>(out, params.weights.size());
    for (double w : params.weights) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(w));
    return out;
}

std::vector<models::ModelParams> decode(const std::string& bytes) {
    Reader in(bytes);
    std::vector<models::ModelParams> out;
    while (!in.done()) {
        in.magic();
        if (auto v = in.get<std::uint16_t>(); v != kVersion) {
            throw PreconditionError("checkpoint: unsupported version " + std::to_string(v));
        }
        auto kind = in.get<std::uint8_t>();
        if (kind > static_cast<std::uint8_t>(models::ModelKind::LSTM)) throw PreconditionError("checkpoint: bad model kind");
        models::ModelParams p;
        p.kind = static_cast<models::ModelKind>(kind);
        auto n_dims = in.get<std::uint32_t>();
        if (n_dims > 64) throw PreconditionError("checkpoint: implausible dims count");
        for (std::uint32_t i = 0; i < n_dims; ++i) p.dims.push_back(in.get<std::uint32_t>());
        p.seed = in.get<std::uint64_t>();
        auto n = in.get<std::uint64_t>();
        if (n != models::ModelParams::weight_count(p.kind, p.dims)) {
            throw PreconditionError("checkpoint: weight count does not match dims");
        }
        p.weights.resize(n);
        for (auto& w : p.weights) w = std::bit_cast<double>(in.get<std::uint64_t>());
        p.validate();
        out.push_back(std::move(p));
    }
    if (out.empty()) throw PreconditionError("checkpoint: empty file");
    return out;
}

void save(const std::vector<models::ModelParams>& members, const std::string& path) {
    std::string bytes;
    for (const auto& m : members) bytes += encode(m);
    csv::write_file(path, bytes);
}

std::vector<models::ModelParams> load(const std::string& path) { return decode(csv::read_file(path)); }

}  // namespace alphalab::checkpoint
