import logging
import warnings

log = logging.getLogger(__name__)


def tsv_line(*args):
    return '\t'.join(map(str, args)) + '\n'


def start_tracking(mlflow_uri, experiment_name, params: dict):
    """Open an MLflow run for a benchmark. Returns False when mlflow is unavailable or no uri is set."""
    if not mlflow_uri:
        return False
    try:
        import mlflow
    except ImportError:
        warnings.warn("mlflow is not installed. Benchmark results will only be written to CSV.")
        return False
    mlflow.set_tracking_uri(str(mlflow_uri))
    mlflow.set_experiment(experiment_name)
    mlflow.start_run()
    mlflow.log_params({key: str(value) for key, value in params.items()})
    return True


def end_tracking():
    import mlflow
    mlflow.end_run()


class InformationLogger(object):
    """Sends aggregated report rows to MLflow as metrics named <mode>_<operation>_<approach>_<stat>,
    with the weight bound as step."""

    def __init__(self, mode):
        self.mode = mode

    def add_values(self, rows, ignore: list = None):
        from mlflow import log_metric

        ignore = [] if ignore is None else ignore
        for row in rows:
            if row['operation'] in ignore:
                continue
            prefix = f"{self.mode}_{row['operation']}_{row['approach']}"
            log_metric(key=f"{prefix}_success_rate", value=row['success_rate'], step=row['l'])
            if row['mean_time_s'] is not None:
                log_metric(key=f"{prefix}_mean_time_s", value=row['mean_time_s'], step=row['l'])
                log_metric(key=f"{prefix}_max_time_s", value=row['max_time_s'], step=row['l'])
        log.debug('Logged %d report rows to mlflow', len(rows))
