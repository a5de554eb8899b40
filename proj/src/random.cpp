#include "iglab/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace iglab {

RandomStream::RandomStream(std::uint64_t seed, int substreams, int jobs)
    : key_(mix64(seed)), substreams_(substreams), jobs_(std::max(1, jobs))
{
    if (substreams < 1)
        throw std::invalid_argument("RandomStream: substreams must be positive");
}

RandomStream RandomStream::child(std::string_view tag) const
{
    return RandomStream(mix64(key_ ^ mix64(hash_tag(tag))), substreams_, jobs_, true);
}

RandomStream RandomStream::child(std::uint64_t index) const
{
    return RandomStream(mix64(key_ + mix64(index + 0x51ed27ULL)), substreams_, jobs_, true);
}

Engine RandomStream::engine() const
{
    return Engine(mix64(key_ ^ 0x5eedULL));
}

Engine RandomStream::substream_engine(int index) const
{
    return Engine(mix64(key_ + mix64(static_cast<std::uint64_t>(index) + 1)));
}

RandomStream RandomStream::with_jobs(int jobs) const
{
    return RandomStream(key_, substreams_, std::max(1, jobs), true);
}

}  // namespace iglab
