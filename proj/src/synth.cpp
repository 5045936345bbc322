#include "spotboost/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "spotboost/rng.hpp"

namespace spotboost {

namespace {

constexpr std::uint64_t kGtStream = 0x4774;
constexpr std::uint64_t kMissStream = 0x4d53;
constexpr std::uint64_t kCandidateStream = 0xc0de;

std::string video_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "video_%03lld", static_cast<long long>(index));
    return buf;
}

// k sorted frames in [0, num_frames) with pairwise separation >= sep:
// sort k uniform draws over the shrunken range, then re-expand.
std::vector<FrameIndex> place_events(std::mt19937_64& gen, std::int64_t k, FrameIndex num_frames,
                                     FrameIndex sep) {
    const FrameIndex space = num_frames - (k - 1) * sep;
    if (space <= 0) {
        throw ConfigError("cannot place " + std::to_string(k) + " events with separation " +
                          std::to_string(sep) + " in " + std::to_string(num_frames) + " frames");
    }
    std::vector<double> draws(static_cast<std::size_t>(k));
    for (double& d : draws) {
        d = rng::uniform01(gen) * static_cast<double>(space);
    }
    std::sort(draws.begin(), draws.end());
    std::vector<FrameIndex> frames(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        frames[static_cast<std::size_t>(i)] =
            static_cast<FrameIndex>(std::floor(draws[static_cast<std::size_t>(i)])) + i * sep;
    }
    return frames;
}

void paint_peak(ScoreMatrix& m, FrameIndex center, ClassIndex cls, double height,
                FrameIndex width) {
    const FrameIndex lo = std::max<FrameIndex>(0, center - width + 1);
    const FrameIndex hi = std::min<FrameIndex>(m.num_frames - 1, center + width - 1);
    for (FrameIndex f = lo; f <= hi; ++f) {
        const FrameIndex offset = f >= center ? f - center : center - f;
        const double v = height * static_cast<double>(width - offset) / static_cast<double>(width);
        m.at(f, cls) = std::max(m.at(f, cls), v);
    }
}

}  // namespace

void SynthConfig::validate() const {
    if (num_videos < 1 || num_frames < 1 || num_classes < 1) {
        throw ConfigError("synthetic dataset needs at least one video, frame and class");
    }
    if (!(events_per_class > 0.0)) {
        throw ConfigError("events_per_class must be positive");
    }
    if (!(fps > 0.0)) {
        throw ConfigError("fps must be positive");
    }
    if (candidates.empty()) {
        throw ConfigError("at least one candidate profile is required");
    }
    std::set<std::string> ids;
    for (const NoiseProfile& p : candidates) {
        if (p.id.empty() || !ids.insert(p.id).second) {
            throw ConfigError("candidate ids must be non-empty and unique");
        }
        if (p.peak_width < 1) {
            throw ConfigError("candidate '" + p.id + "': peak_width must be >= 1");
        }
        if (num_frames <= 2 * p.peak_width) {
            throw ConfigError("candidate '" + p.id + "': num_frames must exceed 2 * peak_width");
        }
        if (p.miss_rate < 0.0 || p.miss_rate > 1.0 || p.noise_floor < 0.0 ||
            p.noise_floor > 1.0) {
            throw ConfigError("candidate '" + p.id + "': rates must lie in [0,1]");
        }
        if (p.false_alarm_rate < 0.0 || p.jitter_std < 0.0) {
            throw ConfigError("candidate '" + p.id + "': rates must be non-negative");
        }
        if (p.miss_rank_lo < 0.0 || p.miss_rank_hi > 1.0 || p.miss_rank_lo > p.miss_rank_hi) {
            throw ConfigError("candidate '" + p.id + "': miss rank range must satisfy 0 <= lo <= hi <= 1");
        }
    }
}

std::pair<std::vector<GroundTruth>, std::vector<CandidateModel>> generate(const SynthConfig& cfg) {
    cfg.validate();

    FrameIndex max_width = 1;
    for (const NoiseProfile& p : cfg.candidates) {
        max_width = std::max(max_width, p.peak_width);
    }
    const FrameIndex sep = 2 * max_width;

    std::vector<GroundTruth> gts;
    gts.reserve(static_cast<std::size_t>(cfg.num_videos));
    for (std::int64_t v = 0; v < cfg.num_videos; ++v) {
        GroundTruth gt;
        gt.video_id = video_name(v);
        gt.fps = cfg.fps;
        gt.num_frames = cfg.num_frames;
        std::mt19937_64 gen(rng::mix(cfg.seed, kGtStream + static_cast<std::uint64_t>(v)));
        for (ClassIndex cls = 0; cls < cfg.num_classes; ++cls) {
            const std::int64_t count = rng::poisson(gen, cfg.events_per_class);
            for (FrameIndex frame : place_events(gen, count, cfg.num_frames, sep)) {
                gt.events.push_back(Event{frame, cls});
            }
        }
        gt.normalize();
        gts.push_back(std::move(gt));
    }

    std::int64_t total_events = 0;
    for (const GroundTruth& gt : gts) {
        total_events += static_cast<std::int64_t>(gt.events.size());
    }
    if (total_events == 0) {
        throw ConfigError("seed produced an empty event set; raise events_per_class");
    }

    // Global event ranks for structured (complementary) misses: the same
    // seeded permutation for every candidate, so disjoint rank ranges miss
    // disjoint events.
    std::vector<std::int64_t> rank(static_cast<std::size_t>(total_events));
    {
        std::vector<std::int64_t> order(static_cast<std::size_t>(total_events));
        for (std::int64_t i = 0; i < total_events; ++i) {
            order[static_cast<std::size_t>(i)] = i;
        }
        std::mt19937_64 gen(rng::mix(cfg.seed, kMissStream));
        for (std::int64_t i = total_events - 1; i > 0; --i) {
            const auto j = static_cast<std::int64_t>(
                rng::bounded(gen, static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        for (std::int64_t i = 0; i < total_events; ++i) {
            rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        }
    }

    std::vector<CandidateModel> pool;
    pool.reserve(cfg.candidates.size());
    for (std::size_t c = 0; c < cfg.candidates.size(); ++c) {
        const NoiseProfile& profile = cfg.candidates[c];
        CandidateModel model;
        model.id = profile.id;
        model.arch_tag = profile.arch_tag;
        model.optimizer_tag = profile.optimizer_tag;
        model.stride_s = profile.stride_s;
        model.delta = profile.delta;

        std::int64_t event_cursor = 0;
        for (std::int64_t v = 0; v < cfg.num_videos; ++v) {
            const GroundTruth& gt = gts[static_cast<std::size_t>(v)];
            std::mt19937_64 gen(rng::mix(
                cfg.seed, kCandidateStream + static_cast<std::uint64_t>(c) * 1000003ULL +
                              static_cast<std::uint64_t>(v)));

            ScoreMatrix m = ScoreMatrix::zeros(gt.video_id, cfg.num_frames, cfg.num_classes);
            if (profile.noise_floor > 0.0) {
                for (double& cell : m.values) {
                    cell = rng::uniform(gen, 0.0, profile.noise_floor);
                }
            }

            // Peak heights stay in (max(noise_floor, 0.5), 1]: above the
            // noise and comfortably above any sane NMS threshold, so a
            // noiseless candidate's events are always recoverable.
            const double height_floor = std::max(profile.noise_floor, 0.5);
            for (const Event& event : gt.events) {
                const std::int64_t g = event_cursor++;
                // Draw the per-event randoms unconditionally so the stream
                // stays aligned whatever the miss decisions are.
                const double u_miss = rng::uniform01(gen);
                const double height = 1.0 - (1.0 - height_floor) * rng::uniform01(gen);
                const double z = rng::gaussian(gen);

                const double frac =
                    static_cast<double>(rank[static_cast<std::size_t>(g)]) /
                    static_cast<double>(total_events);
                const bool rank_missed =
                    frac >= profile.miss_rank_lo && frac < profile.miss_rank_hi;
                if (rank_missed || u_miss < profile.miss_rate) {
                    continue;
                }
                const auto jitter = static_cast<FrameIndex>(std::llround(profile.jitter_std * z));
                const FrameIndex center =
                    std::clamp<FrameIndex>(event.frame + jitter, 0, cfg.num_frames - 1);
                paint_peak(m, center, event.cls, height, profile.peak_width);
            }

            const std::int64_t alarms = rng::poisson(
                gen, static_cast<double>(cfg.num_frames) * profile.false_alarm_rate / 1000.0);
            for (std::int64_t a = 0; a < alarms; ++a) {
                const auto frame = static_cast<FrameIndex>(
                    rng::bounded(gen, static_cast<std::uint64_t>(cfg.num_frames)));
                const auto cls = static_cast<ClassIndex>(
                    rng::bounded(gen, static_cast<std::uint64_t>(cfg.num_classes)));
                const double height = 1.0 - (1.0 - height_floor) * rng::uniform01(gen);
                paint_peak(m, frame, cls, height, profile.peak_width);
            }

            model.scores.emplace(gt.video_id, std::move(m));
        }
        pool.push_back(std::move(model));
    }

    return {std::move(gts), std::move(pool)};
}

}  // namespace spotboost
