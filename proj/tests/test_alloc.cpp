#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <new>

#include "qstack/qstack.hpp"

// Global allocation tracking. Each block carries its size in a header so the
// live byte count can be maintained on delete.
namespace {

constexpr std::size_t kHeader = 16;
std::atomic<std::size_t> g_live{0};
std::atomic<std::size_t> g_peak{0};
std::atomic<std::size_t> g_largest{0};

void *tracked_alloc(std::size_t n) {
    void *raw = std::malloc(n + kHeader);
    if (raw == nullptr) {
        throw std::bad_alloc();
    }
    *static_cast<std::size_t *>(raw) = n;
    const std::size_t live = g_live += n;
    std::size_t peak = g_peak.load();
    while (live > peak && !g_peak.compare_exchange_weak(peak, live)) {
    }
    std::size_t big = g_largest.load();
    while (n > big && !g_largest.compare_exchange_weak(big, n)) {
    }
    return static_cast<char *>(raw) + kHeader;
}

void tracked_free(void *p) noexcept {
    if (p == nullptr) {
        return;
    }
    char *raw = static_cast<char *>(p) - kHeader;
    g_live -= *reinterpret_cast<std::size_t *>(raw);
    std::free(raw);
}

void reset_tracking() {
    g_peak = g_live.load();
    g_largest = 0;
}

} // namespace

void *operator new(std::size_t n) { return tracked_alloc(n); }
void *operator new[](std::size_t n) { return tracked_alloc(n); }
void operator delete(void *p) noexcept { tracked_free(p); }
void operator delete[](void *p) noexcept { tracked_free(p); }
void operator delete(void *p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void *p, std::size_t) noexcept { tracked_free(p); }

namespace {

using namespace qstack;

constexpr std::size_t kQubits = 20;
constexpr std::size_t kStateBytes = (std::size_t{1} << kQubits) * sizeof(Complex);

TEST(Memory, TwentyQubitStatevectorStaysLinear) {
    const Circuit c = benchmark_circuit(kQubits, 2, false);
    const std::size_t base = g_live.load();
    reset_tracking();
    const StateVector s = get_statevector(c);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
    // one state plus bookkeeping; never anything close to a 2^n x 2^n matrix
    EXPECT_LE(g_largest.load(), kStateBytes);
    EXPECT_LT(g_peak.load() - base, 2 * kStateBytes);
}

TEST(Memory, ShotsReuseBoundedStorage) {
    const Circuit c = benchmark_circuit(kQubits, 1);
    RunConfig cfg;
    cfg.shots = 3;
    cfg.fusion = true;
    const std::size_t base = g_live.load();
    reset_tracking();
    const Counts counts = run(c, cfg);
    EXPECT_EQ(counts.shots, 3u);
    // the cached prefix state and one working copy
    EXPECT_LE(g_largest.load(), kStateBytes);
    EXPECT_LT(g_peak.load() - base, 3 * kStateBytes);
}

} // namespace
