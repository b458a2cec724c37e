from celery import shared_task


@shared_task
def simulate_chunk(config, start, stop):
    """Run replicas ``start..stop`` of an experiment and return the raw tally."""
    from .services.simharness import ExperimentConfig, run_replica_chunk

    cfg = ExperimentConfig.from_dict(config)
    return run_replica_chunk(cfg, start, stop).to_dict()
