import logging
import os


def setup_logging(logpath, name="vcstream"):
    # Create a logger
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)  # Set the lowest log level
    os.makedirs(logpath, exist_ok=True)
    logger.handlers = []
    formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s")

    # Create file handler for error logs
    error_handler = logging.FileHandler(os.path.join(logpath, "sweep_error.log"))
    error_handler.setLevel(logging.WARNING)  # sketch failures and aborted runs
    error_handler.setFormatter(formatter)
    logger.addHandler(error_handler)

    # Create file handler for run lifecycle logs
    success_handler = logging.FileHandler(os.path.join(logpath, "sweep_info.log"))
    success_handler.setLevel(logging.INFO)
    success_handler.setFormatter(formatter)
    logger.addHandler(success_handler)

    return logger
