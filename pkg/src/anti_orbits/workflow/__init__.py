"""Workflow orchestration for certification runs."""
