#include "slicing4meta/experiment.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "slicing4meta/error.hpp"
#include "slicing4meta/rng.hpp"

namespace slicing4meta {

void SweepConfig::validate() const
{
    if (!(total_rendering >= 0.0)) throw Error(Errc::ConfigInvalid, "total_rendering must be >= 0");
    if (n_users.empty()) throw Error(Errc::ConfigInvalid, "n_users sweep is empty");
    if (rates.empty()) throw Error(Errc::ConfigInvalid, "rate list is empty");
    for (int n : n_users)
        if (n < 1) throw Error(Errc::ConfigInvalid, "n_users values must be >= 1");
    for (double r : rates)
        if (!(r > 0.0)) throw Error(Errc::ConfigInvalid, "rates must be > 0");
    if (!(bep >= 0.0 && bep <= 1.0)) throw Error(Errc::ConfigInvalid, "bep must be in [0,1]");
    if (objects_min < 1 || objects_max < objects_min) throw Error(Errc::ConfigInvalid, "invalid object range");
    try {
        qoe.validate();
    } catch (const Error& e) {
        throw Error(Errc::ConfigInvalid, e.what());
    }
}

std::vector<SweepRow> run_sweep(const SweepConfig& config)
{
    config.validate();
    const int population = *std::max_element(config.n_users.begin(), config.n_users.end());

    Rng rng(config.seed);
    std::vector<int> objects(static_cast<std::size_t>(population));
    for (auto& n : objects) n = static_cast<int>(rng.uniform_int(config.objects_min, config.objects_max));

    std::vector<SweepRow> rows;
    rows.reserve(config.n_users.size() * config.rates.size());
    for (int n : config.n_users) {
        for (double rate : config.rates) {
            std::vector<UserSession> users;
            users.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                users.push_back(UserSession::make("u" + std::to_string(i), rate, config.bep,
                                                  objects[static_cast<std::size_t>(i)], config.qoe));
            const auto alloc = local_allocate(users, config.total_rendering, config.policy, config.qoe);

            SweepRow row{n, rate, 0.0, 0.0, 0.0};
            double sum = 0.0;
            for (std::size_t i = 0; i < users.size(); ++i) {
                const double mi = meta_immersion(users[i], alloc[i], config.qoe).mi;
                sum += mi;
                row.min_mi = i == 0 ? mi : std::min(row.min_mi, mi);
                row.max_mi = i == 0 ? mi : std::max(row.max_mi, mi);
            }
            row.mean_mi = sum / static_cast<double>(n);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "n_users,rate_mbps,mean_mi,min_mi,max_mi\n";
    for (const auto& r : rows) out += fmt::format("{},{},{},{},{}\n", r.n_users, r.rate, r.mean_mi, r.min_mi, r.max_mi);
    return out;
}

}  // namespace slicing4meta
